//! Double-double arithmetic for bracket evaluation.
//!
//! The density and distribution formulas multiply a very large prefactor by an
//! alternating sum of terms `c · x^a · log^b x` whose true value is many orders
//! of magnitude below the individual terms. Plain f64 loses most or all
//! significant digits in that cancellation, so the sums are evaluated in
//! unevaluated-pair (hi, lo) arithmetic carrying roughly 32 decimal digits,
//! with exact rational coefficients rounded into pairs.

use num_rational::BigRational;
use num_traits::ToPrimitive;

/// An unevaluated sum hi + lo with |lo| at most half an ulp of hi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// ln 2 to double-double precision.
    const LN_2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.319046813846299558e-17,
    };

    pub fn from_f64(a: f64) -> Dd {
        Dd { hi: a, lo: 0.0 }
    }

    /// Exact for |n| < 2^53, which covers every integer used here.
    pub fn from_int(n: i64) -> Dd {
        Dd::from_f64(n as f64)
    }

    pub fn from_rational(r: &BigRational) -> Dd {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Dd::from_f64(hi);
        }
        let residual = r - BigRational::from_float(hi).expect("finite float");
        let lo = residual.to_f64().unwrap_or(0.0);
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add(Dd::from_f64(q3))
    }

    pub fn powi(self, n: u32) -> Dd {
        let mut result = Dd::ONE;
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(base);
            }
        }
        result
    }

    /// Natural log for positive values.
    ///
    /// Range-reduces to f = x·2^(-e) near 1, then ln f = 2·atanh(z) with
    /// z = (f-1)/(f+1), |z| <= sqrt(2)-1 over sqrt(2)+1, via the odd series.
    pub fn ln(self) -> Dd {
        assert!(self.hi > 0.0, "ln requires a positive argument");
        let e = self.hi.log2().round() as i32;
        let scale = 2f64.powi(-e);
        let f = Dd { hi: self.hi * scale, lo: self.lo * scale };
        let z = f.sub(Dd::ONE).div(f.add(Dd::ONE));
        let z2 = z.mul(z);
        let mut term = z;
        let mut sum = z;
        for k in 1..48 {
            term = term.mul(z2);
            let contribution = term.div(Dd::from_int(2 * k + 1));
            sum = sum.add(contribution);
            if contribution.hi.abs() < 1e-40 * sum.hi.abs() {
                break;
            }
        }
        sum.mul_f64(2.0).add(Dd::LN_2.mul_f64(e as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn close(a: Dd, b: Dd, tol: f64) -> bool {
        a.sub(b).to_f64().abs() <= tol
    }

    #[test]
    fn exact_integer_powers() {
        // 3^40 needs 64 bits, beyond one f64 but within a pair
        let p = Dd::from_int(3).powi(40);
        let exact = BigRational::from_integer(BigInt::from(3).pow(40));
        assert_eq!(p, Dd::from_rational(&exact));
    }

    #[test]
    fn division_round_trips() {
        let third = Dd::ONE.div(Dd::from_int(3));
        assert!(close(third.mul_f64(3.0), Dd::ONE, 1e-31));
        let r = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert!(close(third, Dd::from_rational(&r), 1e-32));
    }

    #[test]
    fn rational_conversion_keeps_residual() {
        let r = BigRational::new(BigInt::from(22), BigInt::from(7));
        let d = Dd::from_rational(&r);
        assert!(d.lo != 0.0, "22/7 is not a dyadic rational");
        assert!(close(d.mul_f64(7.0), Dd::from_int(22), 1e-30));
    }

    #[test]
    fn log_reference_points() {
        assert_eq!(Dd::ONE.ln(), Dd::ZERO);
        // ln 4 = 2 ln 2 and ln(1/2) = -ln 2, checked against the stored constant
        assert!(close(Dd::from_int(4).ln(), Dd::LN_2.mul_f64(2.0), 1e-31));
        assert!(close(Dd::from_f64(0.5).ln(), Dd::LN_2.neg(), 1e-32));
    }

    #[test]
    fn log_is_additive() {
        for &(x, y) in &[(0.3, 0.7), (0.9999, 0.0271), (0.513, 0.513)] {
            let lhs = Dd::from_f64(x).mul(Dd::from_f64(y)).ln();
            let rhs = Dd::from_f64(x).ln().add(Dd::from_f64(y).ln());
            let err = lhs.sub(rhs).to_f64().abs();
            assert!(close(lhs, rhs, 1e-29), "ln({x}·{y}), err = {err:.3e}");
        }
    }

    #[test]
    fn cancellation_is_resolved() {
        // (1 - x)(1 + x) vs 1 - x² at x close to 1: equal to pair precision
        let x = Dd::from_f64(1.0 - 1e-8);
        let direct = Dd::ONE.sub(x.mul(x));
        let factored = Dd::ONE.sub(x).mul(Dd::ONE.add(x));
        assert!(close(direct, factored, 1e-38));
    }
}

