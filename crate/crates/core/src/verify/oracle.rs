use crate::error::{Error, Result};
use crate::field::SolutionField;
use crate::kernels::OperatorFamily;
use crate::wavecore::{leapfrog, FdData, FdGrid, FdProblem};

/// Leapfrog solution of the family's equation from t = 0. The damping-free
/// stepper cannot impose the weighted data of the Einstein–de Sitter
/// problem, so that family is rejected.
pub fn fd_variable_oracle(family: &OperatorFamily, data: FdData<'_>, grid: &FdGrid) -> Result<SolutionField> {
    family.validate()?;
    if matches!(family, OperatorFamily::EinsteinDeSitter { .. }) {
        return Err(Error::UnsupportedFamily(format!("{}: no finite-difference oracle for the singular time coefficient", family.label())));
    }
    let fam = *family;
    let speed2 = move |t: f64| fam.speed_squared(t);
    let mut field = leapfrog(
        &FdProblem {
            speed2: &speed2,
            potential: family.potential(),
            t0: 0.0,
            data,
        },
        grid,
        &family.label(),
    )?;
    field.provenance.method = "leapfrog(variable speed)".into();
    Ok(field)
}
