use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    InvalidExtensionDegree(usize),
    FieldTooLarge { p: u32, n: usize },
    /// Two operands live in different fields, or an embedding was requested
    /// between fields that do not nest.
    IncompatibleFields,
    DivisionByZero,
    ZeroDenominator,
    ConstantPolynomial,
    ReduciblePolynomial,
    WrongCharacteristic { expected: &'static str, p: u32 },
    Parse { pos: usize, msg: String },
    SingularCurve,
    SupersingularCurve,
    InvalidKernel,
    /// A search or enumeration would exceed the configured cap.
    BudgetExceeded { what: &'static str, needed: u64, cap: u64 },
    NotRational(String),
    BadReduction(String),
    Internal(&'static str),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::InvalidExtensionDegree(n) => write!(f, "invalid extension degree {n}"),
            Error::FieldTooLarge { p, n } => write!(f, "field of order {p}^{n} is too large"),
            Error::IncompatibleFields => write!(f, "operands belong to incompatible fields"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ZeroDenominator => write!(f, "zero denominator"),
            Error::ConstantPolynomial => write!(f, "polynomial must have positive degree"),
            Error::ReduciblePolynomial => write!(f, "polynomial is reducible"),
            Error::WrongCharacteristic { expected, p } => {
                write!(f, "expected {expected} characteristic, field has characteristic {p}")
            }
            Error::Parse { pos, msg } => write!(f, "parse error at {pos}: {msg}"),
            Error::SingularCurve => write!(f, "curve is singular"),
            Error::SupersingularCurve => write!(f, "curve is supersingular"),
            Error::InvalidKernel => write!(f, "kernel polynomial does not define an isogeny"),
            Error::BudgetExceeded { what, needed, cap } => {
                write!(f, "{what}: {needed} exceeds enumeration cap {cap}")
            }
            Error::NotRational(s) => write!(f, "not rational over the base field: {s}"),
            Error::BadReduction(s) => write!(f, "bad reduction: {s}"),
            Error::Internal(s) => write!(f, "internal error: {s}"),
        }
    }
}

impl core::error::Error for Error {}
