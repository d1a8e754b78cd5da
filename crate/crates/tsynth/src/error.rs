use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("region constant {m} is below the largest guard constant {needed}")]
    ConstantTooSmall { m: u32, needed: u32 },
    #[error("resource limit: {what} exceeded the cap of {cap} states")]
    Resource { what: String, cap: usize },
    #[error("check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
