use std::fmt;
use std::process::ExitCode;

/// A command error tagged with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub kind: Kind,
    pub error: anyhow::Error,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Data,
    Model,
}

impl Kind {
    pub fn exit_code(self) -> ExitCode {
        ExitCode::from(match self {
            Kind::Usage => 1,
            Kind::Data => 2,
            Kind::Model => 3,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

pub type CmdResult<T = ()> = Result<T, Failure>;

/// Attach an exit-code class to any error.
pub trait Classify<T> {
    fn usage(self) -> CmdResult<T>;
    fn data(self) -> CmdResult<T>;
    fn model(self) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> CmdResult<T> {
        self.map_err(|e| Failure {
            kind: Kind::Usage,
            error: e.into(),
        })
    }

    fn data(self) -> CmdResult<T> {
        self.map_err(|e| Failure {
            kind: Kind::Data,
            error: e.into(),
        })
    }

    fn model(self) -> CmdResult<T> {
        self.map_err(|e| Failure {
            kind: Kind::Model,
            error: e.into(),
        })
    }
}
