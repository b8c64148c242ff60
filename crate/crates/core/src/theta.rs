//! Ramanujan's theta function `f(a, b)` at monomial arguments, its named
//! specializations, and the Jacobi triple product as a checkable identity.

use crate::series::{Domain, Series};

/// `f(±q^r, ±q^s)`; both arguments carry the same sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThetaSpec {
    pub r: usize,
    pub s: usize,
    pub negated: bool,
}

impl ThetaSpec {
    /// `f(q^r, q^s)`. Panics unless `r, s >= 1`.
    pub fn new(r: usize, s: usize) -> Self {
        assert!(r >= 1 && s >= 1, "theta exponents must be positive");
        Self {
            r,
            s,
            negated: false,
        }
    }

    /// `f(-q^r, -q^s)`.
    pub fn negated(r: usize, s: usize) -> Self {
        Self {
            negated: true,
            ..Self::new(r, s)
        }
    }

    /// Exponent of `q` in the `n`-th bilateral term.
    fn exponent(&self, n: i64) -> usize {
        let (r, s) = (self.r as i64, self.s as i64);
        (r * n * (n + 1) / 2 + s * n * (n - 1) / 2) as usize
    }

    fn sign(&self, n: i64) -> i64 {
        if self.negated && n.rem_euclid(2) == 1 {
            -1
        } else {
            1
        }
    }
}

/// `sum_{n in Z} (±1)^n q^(r n(n+1)/2 + s n(n-1)/2)` truncated to `order`.
pub fn theta_sum(spec: ThetaSpec, order: usize) -> Series {
    let mut coeffs = vec![0i64; order];
    // exponents grow monotonically in |n| on each side
    for n in 0i64.. {
        let e = spec.exponent(n);
        if e >= order {
            break;
        }
        coeffs[e] += spec.sign(n);
    }
    for n in 1i64.. {
        let e = spec.exponent(-n);
        if e >= order {
            break;
        }
        coeffs[e] += spec.sign(-n);
    }
    Series::from_ints(&coeffs)
}

/// `phi(q) = f(q, q) = sum_{n in Z} q^(n^2)`.
pub fn phi(order: usize) -> Series {
    theta_sum(ThetaSpec::new(1, 1), order)
}

/// `psi(q) = f(q, q^3) = sum_{n >= 0} q^(n(n+1)/2)`.
pub fn psi(order: usize) -> Series {
    theta_sum(ThetaSpec::new(1, 3), order)
}

/// A factor `1 + coeff * q^exponent` of an infinite product.
pub type Binomial = (i64, usize);

/// Factors of `(-a; ab)_inf (-b; ab)_inf (ab; ab)_inf` that touch exponents
/// below `order`.
pub fn jacobi_factors(spec: ThetaSpec, order: usize) -> Vec<Binomial> {
    let step = spec.r + spec.s;
    let c = if spec.negated { -1 } else { 1 };
    let mut factors = Vec::new();
    for start in [spec.r, spec.s] {
        factors.extend((start..order).step_by(step).map(|e| (c, e)));
    }
    factors.extend((step..order).step_by(step).map(|e| (-1, e)));
    factors
}

/// `prod (1 + c q^e)` over the given factors, truncated to `order`.
pub fn product_of_binomials(domain: Domain, order: usize, factors: &[Binomial]) -> Series {
    factors
        .iter()
        .fold(Series::one(domain, order), |acc, &(c, e)| {
            acc.mul_binomial(c, e)
        })
}

/// The triple-product side of the Jacobi identity for `spec`.
pub fn jacobi_product(spec: ThetaSpec, order: usize) -> Series {
    product_of_binomials(Domain::Exact, order, &jacobi_factors(spec, order))
}

/// Whether the bilateral sum equals the triple product to `order`.
pub fn jacobi_triple_product_check(spec: ThetaSpec, order: usize) -> bool {
    theta_sum(spec, order) == jacobi_product(spec, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eta::pochhammer;

    #[test]
    fn named_specializations() {
        assert_eq!(phi(5).to_i64_vec().unwrap(), vec![1, 2, 0, 0, 2]);
        assert_eq!(psi(7).to_i64_vec().unwrap(), vec![1, 1, 0, 1, 0, 0, 1]);
        assert_eq!(theta_sum(ThetaSpec::new(1, 1), 50), phi(50));
        assert_eq!(theta_sum(ThetaSpec::new(1, 3), 50), psi(50));
        assert_eq!(theta_sum(ThetaSpec::negated(1, 2), 200), pochhammer(1, 200));
    }

    #[test]
    fn triple_product_holds() {
        for spec in [
            ThetaSpec::new(1, 1),
            ThetaSpec::new(1, 3),
            ThetaSpec::negated(1, 2),
            ThetaSpec::new(2, 5),
            ThetaSpec::negated(3, 4),
        ] {
            assert!(jacobi_triple_product_check(spec, 200), "{spec:?}");
        }
    }

    #[test]
    fn dropping_a_factor_breaks_the_identity() {
        let spec = ThetaSpec::new(1, 1);
        let mut factors = jacobi_factors(spec, 100);
        factors.remove(3);
        let broken = product_of_binomials(Domain::Exact, 100, &factors);
        assert_ne!(broken, theta_sum(spec, 100));
    }

    #[test]
    #[should_panic]
    fn rejects_zero_exponent() {
        ThetaSpec::new(0, 1);
    }
}
