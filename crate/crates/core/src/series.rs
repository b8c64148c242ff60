//! Truncated formal power series in `q`.
//!
//! A [`Series`] stores the coefficients of `q^0 .. q^(order-1)`; everything at
//! or above `order` is unknown. Binary operations truncate to the smaller of
//! the two orders and never extrapolate.
//!
//! Coefficients live in one of two domains, fixed per series: exact integers,
//! or residues modulo a single word-sized modulus. Mixing domains (or two
//! different moduli) is an error.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exec::Execution;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("coefficient domains differ: {left} vs {right}")]
    DomainMismatch { left: Domain, right: Domain },
    #[error("constant term {0} is not a unit")]
    NonUnit(String),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("exponent scale factor must be at least 1")]
    ZeroScale,
    #[error("invalid dissection: modulus {m}, residue {r}")]
    BadDissection { m: usize, r: usize },
}

/// Coefficient ring of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Exact,
    Modular(u64),
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Exact => f.write_str("exact"),
            Domain::Modular(m) => write!(f, "mod {m}"),
        }
    }
}

/// A residue class modulo `modulus`, with `residue < modulus` always.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModInt {
    residue: u64,
    modulus: u64,
}

impl ModInt {
    pub fn new(value: i64, modulus: u64) -> Result<Self, SeriesError> {
        check_modulus(modulus)?;
        Ok(Self {
            residue: reduce_i64(value, modulus),
            modulus,
        })
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    fn same_modulus(self, other: Self) -> Result<u64, SeriesError> {
        if self.modulus == other.modulus {
            Ok(self.modulus)
        } else {
            Err(SeriesError::DomainMismatch {
                left: Domain::Modular(self.modulus),
                right: Domain::Modular(other.modulus),
            })
        }
    }

    pub fn try_add(self, other: Self) -> Result<Self, SeriesError> {
        let m = self.same_modulus(other)?;
        Ok(Self {
            residue: add_mod(self.residue, other.residue, m),
            modulus: m,
        })
    }

    pub fn try_sub(self, other: Self) -> Result<Self, SeriesError> {
        let m = self.same_modulus(other)?;
        Ok(Self {
            residue: sub_mod(self.residue, other.residue, m),
            modulus: m,
        })
    }

    pub fn try_mul(self, other: Self) -> Result<Self, SeriesError> {
        let m = self.same_modulus(other)?;
        Ok(Self {
            residue: mul_mod(self.residue, other.residue, m),
            modulus: m,
        })
    }

    /// Multiplicative inverse, if the residue is coprime to the modulus.
    pub fn inverse(self) -> Option<Self> {
        inverse_mod(self.residue, self.modulus).map(|residue| Self {
            residue,
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

/// One coefficient, tagged with its domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Exact(BigInt),
    Mod(ModInt),
}

impl Coeff {
    pub fn domain(&self) -> Domain {
        match self {
            Coeff::Exact(_) => Domain::Exact,
            Coeff::Mod(x) => Domain::Modular(x.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Exact(x) => x.is_zero(),
            Coeff::Mod(x) => x.residue == 0,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(x) => write!(f, "{x}"),
            Coeff::Mod(x) => write!(f, "{}", x.residue),
        }
    }
}

fn check_modulus(modulus: u64) -> Result<(), SeriesError> {
    if modulus < 2 {
        Err(SeriesError::BadModulus(modulus))
    } else {
        Ok(())
    }
}

fn reduce_i64(value: i64, modulus: u64) -> u64 {
    (value as i128).rem_euclid(modulus as i128) as u64
}

fn reduce_big(value: &BigInt, modulus: u64) -> u64 {
    value
        .mod_floor(&BigInt::from(modulus))
        .to_u64()
        .expect("residue below a u64 modulus fits in u64")
}

fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

/// Arithmetic of one coefficient domain, used by the shared kernels below.
trait Ring: Sync {
    type Elem: Clone + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    /// `acc += a * b`
    fn mul_add(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem);
    /// `acc -= a * b`
    fn mul_sub(&self, acc: &mut Self::Elem, a: &Self::Elem, b: &Self::Elem);
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn is_zero(&self, x: &BigInt) -> bool {
        x.is_zero()
    }
    fn mul_add(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        *acc += a * b;
    }
    fn mul_sub(&self, acc: &mut BigInt, a: &BigInt, b: &BigInt) {
        *acc -= a * b;
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn unit_inverse(&self, a: &BigInt) -> Option<BigInt> {
        (a.abs().is_one()).then(|| a.clone())
    }
}

struct Residues(u64);

impl Ring for Residues {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, x: &u64) -> bool {
        *x == 0
    }
    fn mul_add(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = add_mod(*acc, mul_mod(*a, *b, self.0), self.0);
    }
    fn mul_sub(&self, acc: &mut u64, a: &u64, b: &u64) {
        *acc = sub_mod(*acc, mul_mod(*a, *b, self.0), self.0);
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    fn unit_inverse(&self, a: &u64) -> Option<u64> {
        inverse_mod(*a, self.0)
    }
}

fn support<'a, R: Ring>(ring: &R, xs: &'a [R::Elem]) -> Vec<(usize, &'a R::Elem)> {
    xs.iter()
        .enumerate()
        .filter(|(_, x)| !ring.is_zero(x))
        .collect()
}

/// Truncated Cauchy product. Iterates over the nonzero terms of the sparser
/// operand, which keeps products with Pochhammer series at O(N^1.5).
fn convolve<R: Ring>(
    ring: &R,
    a: &[R::Elem],
    b: &[R::Elem],
    order: usize,
    exec: Execution,
) -> Vec<R::Elem> {
    let (a, b) = (&a[..order], &b[..order]);
    let sa = support(ring, a);
    let sb = support(ring, b);
    let (sparse, dense) = if sa.len() <= sb.len() {
        (sa, b)
    } else {
        (sb, a)
    };
    exec.for_work(order.saturating_mul(sparse.len()))
        .map_indices(order, |n| {
            let mut acc = ring.zero();
            for &(i, s) in sparse.iter().take_while(|(i, _)| *i <= n) {
                ring.mul_add(&mut acc, s, &dense[n - i]);
            }
            acc
        })
}

/// Truncated quotient `num / den` by forward substitution; cost is
/// O(order * nnz(den)).
fn divide<R: Ring>(
    ring: &R,
    num: &[R::Elem],
    den: &[R::Elem],
    order: usize,
    describe: impl Fn(&R::Elem) -> String,
) -> Result<Vec<R::Elem>, SeriesError> {
    if order == 0 {
        return Ok(Vec::new());
    }
    let inv0 = ring
        .unit_inverse(&den[0])
        .ok_or_else(|| SeriesError::NonUnit(describe(&den[0])))?;
    let tail: Vec<_> = support(ring, &den[1..order])
        .into_iter()
        .map(|(i, d)| (i + 1, d))
        .collect();
    let mut out: Vec<R::Elem> = Vec::with_capacity(order);
    for n in 0..order {
        let mut acc = num[n].clone();
        for &(i, d) in tail.iter().take_while(|(i, _)| *i <= n) {
            ring.mul_sub(&mut acc, d, &out[n - i]);
        }
        out.push(ring.mul(&acc, &inv0));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Coeffs {
    Exact(Vec<BigInt>),
    Modular { modulus: u64, values: Vec<u64> },
}

/// A power series in `q` known exactly below `order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Coeffs,
}

impl Series {
    pub fn exact(coeffs: Vec<BigInt>) -> Self {
        Self {
            coeffs: Coeffs::Exact(coeffs),
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::exact(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Modular series; values are reduced into `[0, modulus)`.
    pub fn modular(values: Vec<u64>, modulus: u64) -> Result<Self, SeriesError> {
        check_modulus(modulus)?;
        let values = values.into_iter().map(|v| v % modulus).collect();
        Ok(Self {
            coeffs: Coeffs::Modular { modulus, values },
        })
    }

    pub fn from_ints_in(domain: Domain, coeffs: &[i64]) -> Result<Self, SeriesError> {
        match domain {
            Domain::Exact => Ok(Self::from_ints(coeffs)),
            Domain::Modular(m) => {
                check_modulus(m)?;
                Self::modular(coeffs.iter().map(|&c| reduce_i64(c, m)).collect(), m)
            }
        }
    }

    /// Builds a series from tagged coefficients, which must share one domain.
    /// An empty list gives the exact series of order 0.
    pub fn try_from_coeffs(coeffs: Vec<Coeff>) -> Result<Self, SeriesError> {
        let domain = coeffs.first().map_or(Domain::Exact, Coeff::domain);
        if let Some(bad) = coeffs.iter().find(|c| c.domain() != domain) {
            return Err(SeriesError::DomainMismatch {
                left: domain,
                right: bad.domain(),
            });
        }
        Ok(match domain {
            Domain::Exact => Self::exact(
                coeffs
                    .into_iter()
                    .map(|c| match c {
                        Coeff::Exact(x) => x,
                        Coeff::Mod(_) => unreachable!(),
                    })
                    .collect(),
            ),
            Domain::Modular(modulus) => Self {
                coeffs: Coeffs::Modular {
                    modulus,
                    values: coeffs
                        .into_iter()
                        .map(|c| match c {
                            Coeff::Mod(x) => x.residue,
                            Coeff::Exact(_) => unreachable!(),
                        })
                        .collect(),
                },
            },
        })
    }

    pub fn zero(domain: Domain, order: usize) -> Self {
        match domain {
            Domain::Exact => Self::exact(vec![BigInt::zero(); order]),
            Domain::Modular(modulus) => Self {
                coeffs: Coeffs::Modular {
                    modulus,
                    values: vec![0; order],
                },
            },
        }
    }

    pub fn one(domain: Domain, order: usize) -> Self {
        Self::monomial(domain, 0, 1, order)
    }

    /// `coeff * q^exponent`, known below `order`.
    pub fn monomial(domain: Domain, exponent: usize, coeff: i64, order: usize) -> Self {
        let mut s = Self::zero(domain, order);
        if exponent < order {
            s.add_to_coeff(exponent, coeff);
        }
        s
    }

    pub fn order(&self) -> usize {
        match &self.coeffs {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Modular { values, .. } => values.len(),
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.coeffs {
            Coeffs::Exact(_) => Domain::Exact,
            Coeffs::Modular { modulus, .. } => Domain::Modular(*modulus),
        }
    }

    pub fn coeff(&self, n: usize) -> Option<Coeff> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.get(n).cloned().map(Coeff::Exact),
            Coeffs::Modular { modulus, values } => values.get(n).map(|&residue| {
                Coeff::Mod(ModInt {
                    residue,
                    modulus: *modulus,
                })
            }),
        }
    }

    pub fn exact_coeffs(&self) -> Option<&[BigInt]> {
        match &self.coeffs {
            Coeffs::Exact(v) => Some(v),
            Coeffs::Modular { .. } => None,
        }
    }

    pub fn residues(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Modular { values, .. } => Some(values),
            Coeffs::Exact(_) => None,
        }
    }

    /// Coefficients as `i64`, when every one fits. Residues are returned as
    /// their canonical representatives.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().map(ToPrimitive::to_i64).collect(),
            Coeffs::Modular { values, .. } => values.iter().map(|&x| x.to_i64()).collect(),
        }
    }

    /// Coefficient of `q^n` reduced modulo `modulus`. For a modular series the
    /// series modulus must be a multiple of `modulus`.
    pub fn residue_at(&self, n: usize, modulus: u64) -> Option<u64> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.get(n).map(|x| reduce_big(x, modulus)),
            Coeffs::Modular { modulus: m, values } => {
                debug_assert_eq!(m % modulus, 0);
                values.get(n).map(|x| x % modulus)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().position(|x| !x.is_zero()),
            Coeffs::Modular { values, .. } => values.iter().position(|&x| x != 0),
        }
    }

    pub fn truncate(&self, order: usize) -> Series {
        let mut out = self.clone();
        match &mut out.coeffs {
            Coeffs::Exact(v) => v.truncate(order),
            Coeffs::Modular { values, .. } => values.truncate(order),
        }
        out
    }

    /// Copy of the series with `delta` added to the coefficient of `q^n`
    /// (no-op beyond the order).
    pub fn perturbed(&self, n: usize, delta: i64) -> Series {
        let mut out = self.clone();
        if n < out.order() {
            out.add_to_coeff(n, delta);
        }
        out
    }

    fn add_to_coeff(&mut self, n: usize, delta: i64) {
        match &mut self.coeffs {
            Coeffs::Exact(v) => v[n] += delta,
            Coeffs::Modular { modulus, values } => {
                values[n] = add_mod(values[n], reduce_i64(delta, *modulus), *modulus)
            }
        }
    }

    fn common_domain(&self, other: &Series) -> Result<Domain, SeriesError> {
        let (l, r) = (self.domain(), other.domain());
        if l == r {
            Ok(l)
        } else {
            Err(SeriesError::DomainMismatch { left: l, right: r })
        }
    }

    fn zip_with(
        &self,
        other: &Series,
        exact: impl Fn(&BigInt, &BigInt) -> BigInt,
        modular: impl Fn(u64, u64, u64) -> u64,
    ) -> Result<Series, SeriesError> {
        self.common_domain(other)?;
        let order = self.order().min(other.order());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                Series::exact(a[..order].iter().zip(b).map(|(x, y)| exact(x, y)).collect())
            }
            (Coeffs::Modular { modulus, values: a }, Coeffs::Modular { values: b, .. }) => Series {
                coeffs: Coeffs::Modular {
                    modulus: *modulus,
                    values: a[..order]
                        .iter()
                        .zip(b)
                        .map(|(&x, &y)| modular(x, y, *modulus))
                        .collect(),
                },
            },
            _ => unreachable!("domains checked above"),
        })
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.zip_with(other, |x, y| x + y, add_mod)
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.zip_with(other, |x, y| x - y, sub_mod)
    }

    pub fn neg(&self) -> Series {
        match &self.coeffs {
            Coeffs::Exact(v) => Series::exact(v.iter().map(|x| -x).collect()),
            Coeffs::Modular { modulus, values } => Series {
                coeffs: Coeffs::Modular {
                    modulus: *modulus,
                    values: values.iter().map(|&x| sub_mod(0, x, *modulus)).collect(),
                },
            },
        }
    }

    pub fn scalar_mul(&self, c: i64) -> Series {
        match &self.coeffs {
            Coeffs::Exact(v) => Series::exact(v.iter().map(|x| x * c).collect()),
            Coeffs::Modular { modulus, values } => {
                let c = reduce_i64(c, *modulus);
                Series {
                    coeffs: Coeffs::Modular {
                        modulus: *modulus,
                        values: values.iter().map(|&x| mul_mod(x, c, *modulus)).collect(),
                    },
                }
            }
        }
    }

    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.mul_with(other, Execution::default())
    }

    /// Product with an explicit execution strategy.
    pub fn mul_with(&self, other: &Series, exec: Execution) -> Result<Series, SeriesError> {
        self.common_domain(other)?;
        let order = self.order().min(other.order());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                Series::exact(convolve(&Integers, a, b, order, exec))
            }
            (Coeffs::Modular { modulus, values: a }, Coeffs::Modular { values: b, .. }) => Series {
                coeffs: Coeffs::Modular {
                    modulus: *modulus,
                    values: convolve(&Residues(*modulus), a, b, order, exec),
                },
            },
            _ => unreachable!("domains checked above"),
        })
    }

    /// `self / other`, requiring a unit constant term in `other`.
    pub fn div(&self, other: &Series) -> Result<Series, SeriesError> {
        self.common_domain(other)?;
        let order = self.order().min(other.order());
        Ok(match (&self.coeffs, &other.coeffs) {
            (Coeffs::Exact(a), Coeffs::Exact(b)) => {
                Series::exact(divide(&Integers, a, b, order, |x| x.to_string())?)
            }
            (Coeffs::Modular { modulus, values: a }, Coeffs::Modular { values: b, .. }) => {
                let m = *modulus;
                Series {
                    coeffs: Coeffs::Modular {
                        modulus: m,
                        values: divide(&Residues(m), a, b, order, |x| format!("{x} (mod {m})"))?,
                    },
                }
            }
            _ => unreachable!("domains checked above"),
        })
    }

    pub fn invert(&self) -> Result<Series, SeriesError> {
        Series::one(self.domain(), self.order()).div(self)
    }

    /// `self^e` by repeated squaring; negative `e` inverts first.
    pub fn pow(&self, e: i64) -> Result<Series, SeriesError> {
        let mut base = if e < 0 { self.invert()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Series::one(self.domain(), self.order());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self * (1 + c*q^exponent)` in one linear pass.
    pub fn mul_binomial(&self, c: i64, exponent: usize) -> Series {
        let mut out = self.clone();
        let order = out.order();
        match &mut out.coeffs {
            Coeffs::Exact(v) => {
                for n in (exponent..order).rev() {
                    let term = &v[n - exponent] * c;
                    v[n] += term;
                }
            }
            Coeffs::Modular { modulus, values } => {
                let m = *modulus;
                let c = reduce_i64(c, m);
                for n in (exponent..order).rev() {
                    values[n] = add_mod(values[n], mul_mod(values[n - exponent], c, m), m);
                }
            }
        }
        out
    }

    /// Multiply by `q^s`; the result is known to `order + s`.
    pub fn shift(&self, s: usize) -> Series {
        let mut out = Series::zero(self.domain(), self.order() + s);
        match (&mut out.coeffs, &self.coeffs) {
            (Coeffs::Exact(dst), Coeffs::Exact(src)) => dst[s..].clone_from_slice(src),
            (Coeffs::Modular { values: dst, .. }, Coeffs::Modular { values: src, .. }) => {
                dst[s..].copy_from_slice(src)
            }
            _ => unreachable!("same domain by construction"),
        }
        out
    }

    /// Substitute `q -> q^k`.
    pub fn scale_exponent(&self, k: usize) -> Result<Series, SeriesError> {
        if k == 0 {
            return Err(SeriesError::ZeroScale);
        }
        let mut out = Series::zero(self.domain(), self.order() * k);
        match (&mut out.coeffs, &self.coeffs) {
            (Coeffs::Exact(dst), Coeffs::Exact(src)) => {
                for (n, x) in src.iter().enumerate() {
                    dst[n * k] = x.clone();
                }
            }
            (Coeffs::Modular { values: dst, .. }, Coeffs::Modular { values: src, .. }) => {
                for (n, &x) in src.iter().enumerate() {
                    dst[n * k] = x;
                }
            }
            _ => unreachable!("same domain by construction"),
        }
        Ok(out)
    }

    /// The series `sum_n a(m*n + r) q^n`.
    pub fn dissect(&self, m: usize, r: usize) -> Result<Series, SeriesError> {
        if m == 0 || r >= m {
            return Err(SeriesError::BadDissection { m, r });
        }
        let order = self.order();
        Ok(Series {
            coeffs: match &self.coeffs {
                Coeffs::Exact(v) => Coeffs::Exact(v.iter().skip(r).step_by(m).cloned().collect()),
                Coeffs::Modular { modulus, values } => Coeffs::Modular {
                    modulus: *modulus,
                    values: values.iter().skip(r).step_by(m).copied().collect(),
                },
            },
        })
        .inspect(|s| debug_assert_eq!(s.order(), order.saturating_sub(r).div_ceil(m)))
    }

    /// Reduce every coefficient modulo `modulus`. Modular inputs are accepted
    /// when their modulus is a multiple of `modulus`.
    pub fn reduce_mod(&self, modulus: u64) -> Result<Series, SeriesError> {
        check_modulus(modulus)?;
        let values = match &self.coeffs {
            Coeffs::Exact(v) => v.iter().map(|x| reduce_big(x, modulus)).collect(),
            Coeffs::Modular { modulus: m, values } => {
                if m % modulus != 0 {
                    return Err(SeriesError::DomainMismatch {
                        left: Domain::Modular(*m),
                        right: Domain::Modular(modulus),
                    });
                }
                values.iter().map(|x| x % modulus).collect()
            }
        };
        Ok(Series {
            coeffs: Coeffs::Modular { modulus, values },
        })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in 0..self.order() {
            let c = self.coeff(n).expect("n < order");
            if c.is_zero() {
                continue;
            }
            let (negative, magnitude) = match &c {
                Coeff::Exact(x) => (x.is_negative(), x.abs().to_string()),
                Coeff::Mod(x) => (false, x.residue.to_string()),
            };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = magnitude == "1";
            match n {
                0 => f.write_str(&magnitude)?,
                1 if unit => f.write_str("q")?,
                1 => write!(f, "{magnitude}*q")?,
                _ if unit => write!(f, "q^{n}")?,
                _ => write!(f, "{magnitude}*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order())?;
        if let Domain::Modular(m) = self.domain() {
            write!(f, " (mod {m})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &Series) -> Vec<i64> {
        s.to_i64_vec().unwrap()
    }

    #[test]
    fn add_cancels_and_truncates() {
        let a = Series::from_ints(&[1, 1, 0]);
        let b = Series::from_ints(&[1, -1, 0]);
        assert_eq!(ints(&a.add(&b).unwrap()), vec![2, 0, 0]);

        let long = Series::from_ints(&[3, 4, 5, 6]);
        let zero = Series::zero(Domain::Exact, 2);
        assert_eq!(long.add(&zero).unwrap(), long.truncate(2));
    }

    #[test]
    fn modular_wraparound() {
        let a = Series::modular(vec![1], 3).unwrap();
        let b = Series::modular(vec![2], 3).unwrap();
        assert_eq!(a.add(&b).unwrap().residues().unwrap(), &[0]);
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let a = Series::modular(vec![1, 2], 3).unwrap();
        let b = Series::modular(vec![1, 2], 5).unwrap();
        let e = Series::from_ints(&[1, 2]);
        assert!(matches!(a.add(&b), Err(SeriesError::DomainMismatch { .. })));
        assert!(matches!(a.mul(&e), Err(SeriesError::DomainMismatch { .. })));
        let x = ModInt::new(1, 3).unwrap();
        let y = ModInt::new(1, 5).unwrap();
        assert!(x.try_add(y).is_err());
        assert!(x.try_mul(y).is_err());
    }

    #[test]
    fn mixed_coeff_list_rejected() {
        let coeffs = vec![
            Coeff::Exact(BigInt::from(1)),
            Coeff::Mod(ModInt::new(1, 24).unwrap()),
        ];
        assert!(Series::try_from_coeffs(coeffs).is_err());
    }

    #[test]
    fn mul_small_cases() {
        let a = Series::from_ints(&[1, 1, 0, 0]);
        let b = Series::from_ints(&[1, -1, 0, 0]);
        assert_eq!(ints(&a.mul(&b).unwrap()), vec![1, 0, -1, 0]);
        let one = Series::one(Domain::Exact, 4);
        assert_eq!(a.mul(&one).unwrap(), a);
    }

    #[test]
    fn square_of_all_ones_counts_compositions() {
        // coefficient m of (sum q^n)^2 is #{(i, j): i + j = m} = m + 1
        let n = 8;
        let ones = Series::from_ints(&vec![1; n]);
        let sq = ones.mul(&ones).unwrap();
        let expected: Vec<i64> = (0..n as i64).map(|m| m + 1).collect();
        assert_eq!(ints(&sq), expected);
    }

    #[test]
    fn invert_geometric() {
        let a = Series::from_ints(&[1, -1, 0, 0, 0, 0]);
        assert_eq!(ints(&a.invert().unwrap()), vec![1; 6]);
        let one = Series::one(Domain::Exact, 5);
        assert_eq!(one.invert().unwrap(), one);
    }

    #[test]
    fn invert_rejects_non_units() {
        let a = Series::from_ints(&[2, 1]);
        assert!(matches!(a.invert(), Err(SeriesError::NonUnit(_))));
        let m = Series::modular(vec![3, 1], 24).unwrap();
        assert!(matches!(m.invert(), Err(SeriesError::NonUnit(_))));
        let ok = Series::modular(vec![5, 1, 0, 0], 24).unwrap();
        let prod = ok.mul(&ok.invert().unwrap()).unwrap();
        assert_eq!(prod, Series::one(Domain::Modular(24), 4));
    }

    #[test]
    fn pow_basics() {
        let a = Series::from_ints(&[1, 1, 0, 0]);
        assert_eq!(ints(&a.pow(2).unwrap()), vec![1, 2, 1, 0]);
        assert_eq!(a.pow(0).unwrap(), Series::one(Domain::Exact, 4));
        assert_eq!(ints(&a.pow(-1).unwrap()), vec![1, -1, 1, -1]);
        assert!(Series::from_ints(&[0, 1]).pow(-2).is_err());
    }

    #[test]
    fn scale_and_dissect() {
        let a = Series::from_ints(&[1, 1]);
        let s = a.scale_exponent(5).unwrap();
        assert_eq!(ints(&s), vec![1, 0, 0, 0, 0, 1, 0, 0, 0, 0]);
        assert_eq!(a.scale_exponent(1).unwrap(), a);
        assert!(a.scale_exponent(0).is_err());

        let ones = Series::from_ints(&[1; 24]);
        assert_eq!(ints(&ones.dissect(5, 4).unwrap()), vec![1; 4]);
        assert_eq!(ones.dissect(1, 0).unwrap(), ones);
        assert!(ones.dissect(5, 5).is_err());
        assert!(ones.dissect(0, 0).is_err());
    }

    #[test]
    fn dissect_order_is_ceiling() {
        let a = Series::from_ints(&[1; 13]);
        assert_eq!(a.dissect(5, 4).unwrap().order(), 2); // exponents 4, 9
        assert_eq!(a.dissect(5, 2).unwrap().order(), 3); // 2, 7, 12
        assert_eq!(Series::from_ints(&[1, 2]).dissect(5, 3).unwrap().order(), 0);
    }

    #[test]
    fn zero_order_series_absorbs() {
        let empty = Series::zero(Domain::Exact, 0);
        let a = Series::from_ints(&[1, 2, 3]);
        assert_eq!(a.mul(&empty).unwrap().order(), 0);
        assert_eq!(empty.invert().unwrap().order(), 0);
        assert_eq!(empty.dissect(5, 3).unwrap().order(), 0);
    }

    #[test]
    fn reduce_mod_normalizes() {
        let a = Series::from_ints(&[12, 36]);
        assert_eq!(a.reduce_mod(24).unwrap().residues().unwrap(), &[12, 12]);
        let neg = Series::from_ints(&[-1]);
        assert_eq!(neg.reduce_mod(24).unwrap().residues().unwrap(), &[23]);
        assert!(matches!(a.reduce_mod(1), Err(SeriesError::BadModulus(1))));
        let m = a.reduce_mod(192).unwrap();
        assert_eq!(m.reduce_mod(24).unwrap().residues().unwrap(), &[12, 12]);
        assert!(m.reduce_mod(7).is_err());
    }

    #[test]
    fn shift_and_binomial() {
        let a = Series::from_ints(&[1, 2]);
        assert_eq!(ints(&a.shift(3)), vec![0, 0, 0, 1, 2]);
        let b = Series::from_ints(&[1, 0, 0, 0]).mul_binomial(-1, 1);
        assert_eq!(ints(&b), vec![1, -1, 0, 0]);
        let c = b.mul_binomial(-1, 1);
        assert_eq!(ints(&c), vec![1, -2, 1, 0]);
    }

    #[test]
    fn display_is_readable() {
        let a = Series::from_ints(&[1, -1, -1, 0, 0, 2]);
        assert_eq!(a.to_string(), "1 - q - q^2 + 2*q^5 + O(q^6)");
        let z = Series::zero(Domain::Modular(24), 3);
        assert_eq!(z.to_string(), "0 + O(q^3) (mod 24)");
    }

    #[test]
    fn modint_inverse() {
        let x = ModInt::new(5, 24).unwrap();
        assert_eq!(x.inverse().unwrap().residue(), 5);
        assert!(ModInt::new(6, 24).unwrap().inverse().is_none());
        assert_eq!(ModInt::new(-1, 24).unwrap().residue(), 23);
        assert!(ModInt::new(1, 1).is_err());
    }
}
