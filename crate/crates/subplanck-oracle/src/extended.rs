//! Minimal double-double arithmetic and an extended-precision Bessel power
//! series, used to certify the production evaluator beyond f64 resolution.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let err = a.mul_add(b, -p);
    Dd { hi: p, lo: err }
}

impl Dd {
    fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        let t = two_sum(s.hi, lo);
        Dd { hi: t.hi, lo: t.lo }
    }

    fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        let t = two_sum(p.hi, lo);
        Dd { hi: t.hi, lo: t.lo }
    }

    fn mul_f64(self, x: f64) -> Dd {
        self.mul(Dd::from_f64(x))
    }

    fn div_f64(self, x: f64) -> Dd {
        let q1 = self.hi / x;
        let r = self.add(two_prod(q1, x).neg());
        let q2 = (r.hi + r.lo) / x;
        let t = two_sum(q1, q2);
        Dd { hi: t.hi, lo: t.lo }
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

/// `J_order(z)` summed term by term in double-double precision until the
/// running term drops below `1e-25`; several digits beyond f64 for
/// `|z| ≤ 30`.
pub fn bessel_j_series_dd(order: u32, z: f64) -> f64 {
    let sign = if z < 0.0 && order % 2 == 1 { -1.0 } else { 1.0 };
    let az = z.abs();
    if az == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    let half = az / 2.0;
    let mut term = Dd::from_f64(1.0);
    for k in 1..=order as u64 {
        term = term.mul_f64(half).div_f64(k as f64);
    }
    let neg_q = two_prod(half, half).neg();
    let mut sum = term;
    let mut l = 0u64;
    loop {
        l += 1;
        term = term
            .mul(neg_q)
            .div_f64(l as f64)
            .div_f64((order as u64 + l) as f64);
        sum = sum.add(term);
        if term.hi.abs() < 1e-25 || l > 600 {
            break;
        }
    }
    sign * (sum.hi + sum.lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_known_low_order_values() {
        // J_0(1) and J_1(1), 16 correct digits
        assert!((bessel_j_series_dd(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j_series_dd(1, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
    }

    #[test]
    fn recurrence_holds_to_extended_precision() {
        for z in [0.5, 2.4, 7.0, 15.0] {
            for n in 1..=20u32 {
                let lhs = bessel_j_series_dd(n - 1, z) + bessel_j_series_dd(n + 1, z);
                let rhs = 2.0 * n as f64 / z * bessel_j_series_dd(n, z);
                assert!(
                    (lhs - rhs).abs() < 1e-13 * lhs.abs().max(1.0),
                    "n={n} z={z}"
                );
            }
        }
    }
}
