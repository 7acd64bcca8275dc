use thiserror::Error;

/// A model parameter outside its admissible domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} = {value} is outside {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("{0}")]
    Invalid(String),
}

impl ParamError {
    pub(crate) fn out_of_range(name: &'static str, value: f64, expected: &'static str) -> Self {
        ParamError::OutOfRange {
            name,
            value,
            expected,
        }
    }
}

/// Check `lo <= value <= hi`, rejecting NaN.
pub(crate) fn check_closed(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    expected: &'static str,
) -> Result<(), ParamError> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(ParamError::out_of_range(name, value, expected))
    }
}
