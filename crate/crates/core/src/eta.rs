//! Pochhammer products `f_k = (q^k; q^k)_inf` and finite products of their
//! integer powers (eta quotients).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::series::{Domain, Series, SeriesError};

/// Expansion of `f_k` to `order` via Euler's pentagonal number theorem:
/// `sum_n (-1)^n q^(k n(3n+1)/2)` over all integers `n`.
pub fn pochhammer(k: usize, order: usize) -> Series {
    pochhammer_in(Domain::Exact, k, order)
}

pub fn pochhammer_in(domain: Domain, k: usize, order: usize) -> Series {
    assert!(k >= 1, "pochhammer scale must be positive");
    let mut coeffs = vec![0i64; order];
    for n in 0usize.. {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        // n(3n-1)/2 <= n(3n+1)/2, so the smaller one bounds the loop
        let low = k * (n * (3 * n).saturating_sub(1) / 2);
        if low >= order {
            break;
        }
        let high = k * (n * (3 * n + 1) / 2);
        coeffs[low] = sign;
        if high < order {
            coeffs[high] = sign;
        }
    }
    Series::from_ints_in(domain, &coeffs).expect("domain modulus validated by caller")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EtaParseError {
    #[error("malformed eta factor `{0}`, expected fK^E")]
    Factor(String),
    #[error("eta scale must be positive in `{0}`")]
    ZeroScale(String),
}

/// `prod f_k^e` over a finite set of distinct scales.
///
/// Duplicate scales are merged on construction and zero exponents dropped, so
/// two quotients denoting the same product compare equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EtaQuotient {
    factors: BTreeMap<usize, i64>,
}

impl EtaQuotient {
    pub fn new(factors: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut merged = BTreeMap::new();
        for (k, e) in factors {
            assert!(k >= 1, "eta scale must be positive");
            *merged.entry(k).or_insert(0) += e;
        }
        merged.retain(|_, e| *e != 0);
        Self { factors: merged }
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.factors.iter().map(|(&k, &e)| (k, e))
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of two quotients (exponents add).
    pub fn times(&self, other: &EtaQuotient) -> EtaQuotient {
        EtaQuotient::new(self.factors().chain(other.factors()))
    }

    /// Expand using caller-supplied `f_k` series. Positive powers multiply,
    /// negative powers divide, one factor at a time, so sparse Pochhammer
    /// inputs stay cheap.
    pub fn expand_with<F>(
        &self,
        domain: Domain,
        order: usize,
        mut f: F,
    ) -> Result<Series, SeriesError>
    where
        F: FnMut(usize) -> Result<Series, SeriesError>,
    {
        let mut acc = Series::one(domain, order);
        for (k, e) in self.factors() {
            let fk = f(k)?;
            for _ in 0..e.unsigned_abs() {
                acc = if e > 0 { acc.mul(&fk)? } else { acc.div(&fk)? };
            }
        }
        Ok(acc)
    }
}

/// `prod pochhammer(k)^e` truncated to `order`, with exact coefficients.
pub fn eta_quotient(spec: &EtaQuotient, order: usize) -> Result<Series, SeriesError> {
    eta_quotient_in(spec, Domain::Exact, order)
}

pub fn eta_quotient_in(
    spec: &EtaQuotient,
    domain: Domain,
    order: usize,
) -> Result<Series, SeriesError> {
    if let Domain::Modular(m) = domain {
        if m < 2 {
            return Err(SeriesError::BadModulus(m));
        }
    }
    spec.expand_with(domain, order, |k| Ok(pochhammer_in(domain, k, order)))
}

/// Canonical text form, e.g. `f1^-11 * f2^4 * f3^6 * f4^1`; the empty
/// product is `1`.
impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (k, e)) in self.factors().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "f{k}^{e}")?;
        }
        Ok(())
    }
}

impl FromStr for EtaQuotient {
    type Err = EtaParseError;

    /// Accepts the canonical form; a bare `fK` means exponent 1.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "1" {
            return Ok(EtaQuotient::default());
        }
        let mut factors = Vec::new();
        for token in s.split('*').map(str::trim) {
            let body = token
                .strip_prefix('f')
                .ok_or_else(|| EtaParseError::Factor(token.to_string()))?;
            let (scale, exp) = match body.split_once('^') {
                Some((k, e)) => (k, e),
                None => (body, "1"),
            };
            let k: usize = scale
                .parse()
                .map_err(|_| EtaParseError::Factor(token.to_string()))?;
            let e: i64 = exp
                .parse()
                .map_err(|_| EtaParseError::Factor(token.to_string()))?;
            if k == 0 {
                return Err(EtaParseError::ZeroScale(token.to_string()));
            }
            factors.push((k, e));
        }
        Ok(EtaQuotient::new(factors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagonal_expansion() {
        let f1 = pochhammer(1, 13);
        assert_eq!(
            f1.to_i64_vec().unwrap(),
            vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]
        );
        assert_eq!(pochhammer(1, 1).to_i64_vec().unwrap(), vec![1]);
        let f25 = pochhammer(25, 26).to_i64_vec().unwrap();
        assert_eq!(f25[0], 1);
        assert_eq!(f25[25], -1);
        assert_eq!(f25.iter().filter(|&&c| c != 0).count(), 2);
        assert_eq!(pochhammer(3, 0).order(), 0);
    }

    #[test]
    fn ped_generating_function_head() {
        let spec = EtaQuotient::new([(4, 1), (1, -1)]);
        let s = eta_quotient(&spec, 6).unwrap();
        assert_eq!(s.to_i64_vec().unwrap(), vec![1, 1, 2, 3, 4, 6]);
    }

    #[test]
    fn empty_quotient_is_one() {
        let s = eta_quotient(&EtaQuotient::default(), 7).unwrap();
        assert_eq!(s, Series::one(Domain::Exact, 7));
    }

    #[test]
    fn product_of_three_matches_direct_products() {
        let n = 80;
        let spec = EtaQuotient::new([(1, 1), (6, 1), (12, 1)]);
        let direct = pochhammer(1, n)
            .mul(&pochhammer(6, n))
            .unwrap()
            .mul(&pochhammer(12, n))
            .unwrap();
        assert_eq!(eta_quotient(&spec, n).unwrap(), direct);
    }

    #[test]
    fn normalization_merges_scales() {
        let a = EtaQuotient::new([(2, 3), (1, -1), (2, 1), (5, 0)]);
        let b = EtaQuotient::new([(1, -1), (2, 4)]);
        assert_eq!(a, b);
        assert!(EtaQuotient::new([(3, 2), (3, -2)]).is_empty());
    }

    #[test]
    fn text_form_round_trip() {
        let q = EtaQuotient::new([(1, -11), (2, 4), (3, 6), (4, 1)]);
        assert_eq!(q.to_string(), "f1^-11 * f2^4 * f3^6 * f4^1");
        assert_eq!(q.to_string().parse::<EtaQuotient>().unwrap(), q);
        assert_eq!(
            "f4 * f1^-1".parse::<EtaQuotient>().unwrap(),
            EtaQuotient::new([(4, 1), (1, -1)])
        );
        assert_eq!("1".parse::<EtaQuotient>().unwrap(), EtaQuotient::default());
        assert!("g1^2".parse::<EtaQuotient>().is_err());
        assert!("f0^2".parse::<EtaQuotient>().is_err());
        assert!("f2^x".parse::<EtaQuotient>().is_err());
    }

    #[test]
    fn modular_expansion_matches_reduced_exact() {
        let spec: EtaQuotient = "f1^-11 * f2^4 * f3^6 * f4^1".parse().unwrap();
        let exact = eta_quotient(&spec, 120).unwrap();
        let modular = eta_quotient_in(&spec, Domain::Modular(24), 120).unwrap();
        assert_eq!(exact.reduce_mod(24).unwrap(), modular);
    }
}
