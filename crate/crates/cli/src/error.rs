use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qem_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use qem_core::Error as E;
        match self {
            Self::Config(_) => 2,
            Self::Core(e) => match e {
                E::Parameter(_) | E::Lookup { .. } => 2,
                E::Parse { .. }
                | E::EmptyTable(_)
                | E::Io(_)
                | E::Bitstring(_)
                | E::Arity { .. }
                | E::Normalization(_)
                | E::SingularResponse(_)
                | E::Capacity(_) => 3,
                E::UnstableDenominator { .. }
                | E::Degenerate(_)
                | E::Range { .. }
                | E::AllDiscarded(_) => 4,
                E::InvalidGate(_) | E::QubitOutOfRange { .. } | E::DuplicateQubit(_) => 1,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
