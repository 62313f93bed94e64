use super::upoly::inv_mod;
use super::{is_prime, CoeffError, Field};

/// The prime field `F_p`, elements are residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Largest supported characteristic; keeps every product inside `u64`.
    pub const MAX_P: u32 = 1 << 16;

    pub fn new(p: u32) -> Result<Self, CoeffError> {
        if !is_prime(p) {
            return Err(CoeffError::InvalidArgument(format!("{p} is not prime")));
        }
        if p > Self::MAX_P {
            return Err(CoeffError::InvalidArgument(format!(
                "characteristic {p} exceeds {}",
                Self::MAX_P
            )));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// Checked constructor for an element given by its integer lift.
    pub fn elem(&self, v: u32) -> Result<u32, CoeffError> {
        if v >= self.p {
            return Err(CoeffError::InvalidArgument(format!(
                "{v} is not a residue modulo {}",
                self.p
            )));
        }
        Ok(v)
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(&self, a: &u32, b: &u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: &u32) -> Result<u32, CoeffError> {
        if *a == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(inv_mod(*a, self.p))
    }

    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }

    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
}
