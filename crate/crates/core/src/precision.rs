use rug::Float;

/// Working precision in bits, together with the derived tolerances.
///
/// Two quantities are equal when they differ by at most `eps`, distinct
/// when they differ by at least `sqrt_eps`, and anything in between is
/// refused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    bits: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closeness {
    Equal,
    Distinct,
    Ambiguous,
}

impl Precision {
    pub const DEFAULT_BITS: u32 = 256;
    pub const MIN_BITS: u32 = 16;

    pub fn new(bits: u32) -> Self {
        Precision { bits: bits.max(Self::MIN_BITS) }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// 2^(-bits/2)
    pub fn eps(&self) -> Float {
        Float::with_val(self.bits, 1) >> (self.bits / 2)
    }

    /// 2^(-bits/4)
    pub fn sqrt_eps(&self) -> Float {
        Float::with_val(self.bits, 1) >> (self.bits / 4)
    }

    pub fn eps_f64(&self) -> f64 {
        2f64.powi(-((self.bits / 2) as i32))
    }

    pub fn sqrt_eps_f64(&self) -> f64 {
        2f64.powi(-((self.bits / 4) as i32))
    }

    pub fn classify(&self, dist: &Float) -> Closeness {
        let d = Float::with_val(self.bits, dist.abs_ref());
        if d <= self.eps() {
            Closeness::Equal
        } else if d >= self.sqrt_eps() {
            Closeness::Distinct
        } else {
            Closeness::Ambiguous
        }
    }

    pub fn float(&self, v: f64) -> Float {
        Float::with_val(self.bits, v)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::new(Self::DEFAULT_BITS)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances_follow_bits() {
        let p = Precision::new(256);
        assert_eq!(p.eps().to_f64(), 2f64.powi(-128));
        assert_eq!(p.sqrt_eps().to_f64(), 2f64.powi(-64));
    }

    #[test]
    fn classify_bands() {
        let p = Precision::new(64);
        let f = |x: f64| Float::with_val(64, x);
        assert_eq!(p.classify(&f(1e-12)), Closeness::Equal);
        assert_eq!(p.classify(&f(1e-6)), Closeness::Ambiguous);
        assert_eq!(p.classify(&f(1e-2)), Closeness::Distinct);
    }
}
