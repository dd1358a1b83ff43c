use std::fmt;

/// The error type for every fallible operation in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A prime-field modulus failed the primality check.
    NotPrime(u64),
    /// Operands belong to different rings (or to the wrong ring).
    RingMismatch,
    /// Division or inversion of zero.
    DivisionByZero,
    /// An operation was applied to the wrong number of arguments.
    ArityMismatch { expected: usize, got: usize },
    /// A carrier value or table entry is out of range.
    ValueOutOfRange { value: u64, bound: u64 },
    /// Two operations live on carriers of different sizes.
    CarrierMismatch { left: usize, right: usize },
    /// An operation on the wrong carrier size (e.g. a Boolean-only routine).
    WrongCarrier { expected: usize, got: usize },
    /// A value table is structurally inconsistent.
    InvalidTable(String),
    /// A polynomial is structurally inconsistent.
    InvalidPoly(String),
    /// Canonical-form parameters violate the form's invariants.
    InvalidForm(String),
    /// Any other malformed input.
    InvalidInput(String),
    /// The supplied unary map is not idempotent.
    NotIdempotent,
    /// A primitivity check is missing the associative operations of an arity
    /// that could derive to the target arity.
    IncompleteCatalog { arity: usize },
    /// The operation is only defined over prime fields.
    RequiresPrimeField,
    /// The requested scan exceeds the configured size bound.
    InfeasibleSize { needed: u128, bound: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::RingMismatch => write!(f, "operands belong to different rings"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::ArityMismatch { expected, got } => {
                write!(f, "expected {expected} arguments, got {got}")
            }
            Error::ValueOutOfRange { value, bound } => {
                write!(f, "value {value} out of range (carrier size {bound})")
            }
            Error::CarrierMismatch { left, right } => {
                write!(f, "operations on different carriers ({left} vs {right} elements)")
            }
            Error::WrongCarrier { expected, got } => {
                write!(f, "requires a {expected}-element carrier, got {got}")
            }
            Error::InvalidTable(msg) => write!(f, "invalid operation table: {msg}"),
            Error::InvalidPoly(msg) => write!(f, "invalid polynomial: {msg}"),
            Error::InvalidForm(msg) => write!(f, "invalid form parameters: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NotIdempotent => write!(f, "map is not idempotent"),
            Error::IncompleteCatalog { arity } => {
                write!(f, "catalog is missing the associative operations of arity {arity}")
            }
            Error::RequiresPrimeField => write!(f, "operation requires a prime field"),
            Error::InfeasibleSize { needed, bound } => {
                write!(f, "infeasible size: {needed} cells exceeds the bound of {bound}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
