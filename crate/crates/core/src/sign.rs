use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};

/// Orientation of a tuple: the sign of a determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(i8)]
pub enum Sign {
    Negative = -1,
    Zero = 0,
    Positive = 1,
}

impl Sign {
    #[inline]
    pub fn from_i8(v: i8) -> Sign {
        match v.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    #[inline]
    pub fn of<T: num_traits::Signed>(v: &T) -> Sign {
        if v.is_positive() {
            Sign::Positive
        } else if v.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    #[inline]
    pub fn as_i8(self) -> i8 {
        self as i8
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }

    /// Character used by the chirotope text format.
    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    #[inline]
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    #[inline]
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * rhs.as_i8())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}
