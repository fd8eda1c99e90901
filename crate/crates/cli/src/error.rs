use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lattice(#[from] wiretap_lattice::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl CliError {
    /// 3 for refused resource caps, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lattice(wiretap_lattice::Error::ResourceCap { .. }) => 3,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        use wiretap_lattice::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Lattice(e) => match e {
                E::ResourceCap { .. } => "resource_cap",
                E::InvalidDimension { .. } | E::InvalidParameter { .. } | E::ShapeMismatch { .. } => "invalid_parameter",
                E::NotSublattice { .. } | E::IndexNotPowerOfTwo { .. } => "invalid_quotient",
                E::NotInLattice { .. } | E::BadLabel(_) => "invalid_input",
                E::Degenerate | E::Unsupported(_) | E::Overflow => "unsupported",
            },
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            message: String,
            exit_code: i32,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        let w = Wrapper { error: Body { kind: self.kind(), message: self.to_string(), exit_code: self.exit_code() } };
        serde_json::to_string(&w).expect("error object serializes")
    }
}
