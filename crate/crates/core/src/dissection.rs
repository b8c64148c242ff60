//! Replay of the mod-24 argument for ped(n) as a chain of checkable series
//! identities.
//!
//! Each link is a [`ProofStep`]: two series and an optional modulus. The chain
//! starts from the 5-dissection of `f1` (via the Rogers–Ramanujan quotient
//! `R(q)`) and the known generating function of ped(9n+7), reduces it modulo
//! 24 to `12 f1 f6 f12`, extracts the `q^(5n+4)` and `q^(5n+3)` classes, and
//! closes with oracle scans of the resulting self-similarity and its
//! iterates.
//!
//! All `f_k` used by the series steps are derived from a single shared
//! expansion of `f1` (a [`SeriesBasis`]), so corrupting any one of its
//! coefficients is visible to the chain.

use std::fmt;

use crate::eta::{pochhammer, EtaQuotient};
use crate::exec::Execution;
use crate::partitions::{
    family_offset, ped_table, theorem_family_by_iteration, FamilyKind, PartitionError, PedTable,
    Progression,
};
use crate::series::{Domain, Series, SeriesError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DissectionError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("shifted Pochhammer needs 0 < a and m > 0 (got a={a}, m={m})")]
    BadShift { a: usize, m: usize },
}

/// `prod_{n >= 0} (1 - q^(a + m n))` truncated to `order`.
pub fn shifted_pochhammer(a: usize, m: usize, order: usize) -> Result<Series, DissectionError> {
    if a == 0 || m == 0 {
        return Err(DissectionError::BadShift { a, m });
    }
    Ok((a..order)
        .step_by(m)
        .fold(Series::one(Domain::Exact, order), |acc, e| {
            acc.mul_binomial(-1, e)
        }))
}

/// `R(q) = (q^2;q^5)(q^3;q^5) / ((q;q^5)(q^4;q^5))` and its reciprocal.
///
/// This orientation is the one for which `f1 = f25 (R(q^5) - q - q^2/R(q^5))`
/// holds; the opposite quotient is `r_inv`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RSeries {
    pub r: Series,
    pub r_inv: Series,
}

pub fn rogers_ramanujan(order: usize) -> Result<RSeries, DissectionError> {
    let sp = |a| shifted_pochhammer(a, 5, order);
    let num = sp(2)?.mul(&sp(3)?)?;
    let den = sp(1)?.mul(&sp(4)?)?;
    let r = num.div(&den)?;
    let r_inv = r.invert()?;
    Ok(RSeries { r, r_inv })
}

/// `f25 * (R(q^5) - q - q^2 / R(q^5))` to `order`, the right side of the
/// 5-dissection of `f1`. `f25` is supplied by the caller.
pub fn five_dissection_of_f1(f25: &Series, order: usize) -> Result<Series, DissectionError> {
    let rr = rogers_ramanujan(order.div_ceil(5))?;
    let r5 = rr.r.scale_exponent(5)?.truncate(order);
    let r5_inv = rr.r_inv.scale_exponent(5)?.truncate(order);
    let inner = r5
        .sub(&Series::monomial(Domain::Exact, 1, 1, order))?
        .sub(&r5_inv.shift(2).truncate(order))?;
    Ok(f25.mul(&inner)?)
}

/// A claimed identity `lhs ≡ rhs`, exactly or modulo `modulus`, compared up to
/// the smaller of the two orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub label: String,
    pub lhs: Series,
    pub rhs: Series,
    pub modulus: Option<u64>,
}

/// First exponent where a step's two sides disagree, and the difference there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFailure {
    pub exponent: usize,
    pub difference: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub label: String,
    pub order: usize,
    pub modulus: Option<u64>,
    pub failure: Option<StepFailure>,
}

impl StepOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// A step that could not be built; the error always arises from a constant
    /// term, so it is pinned to exponent 0.
    fn broken(label: &str, err: &DissectionError) -> Self {
        Self {
            label: label.to_string(),
            order: 0,
            modulus: None,
            failure: Some(StepFailure {
                exponent: 0,
                difference: format!("error: {err}"),
            }),
        }
    }
}

impl fmt::Display for StepOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self
            .modulus
            .map_or(String::new(), |m| format!(" (mod {m})"));
        match &self.failure {
            None => write!(
                f,
                "PASS {}: verified to order {}{m}",
                self.label, self.order
            ),
            Some(w) => write!(
                f,
                "FAIL {}: differs at q^{} by {}{m}",
                self.label, w.exponent, w.difference
            ),
        }
    }
}

impl ProofStep {
    pub fn new(label: impl Into<String>, lhs: Series, rhs: Series, modulus: Option<u64>) -> Self {
        Self {
            label: label.into(),
            lhs,
            rhs,
            modulus,
        }
    }

    pub fn order(&self) -> usize {
        self.lhs.order().min(self.rhs.order())
    }

    pub fn check(&self) -> StepOutcome {
        let diff = self.lhs.sub(&self.rhs).and_then(|d| match self.modulus {
            Some(m) => d.reduce_mod(m),
            None => Ok(d),
        });
        let failure = match diff {
            Ok(d) => d.first_nonzero().map(|e| StepFailure {
                exponent: e,
                difference: d.coeff(e).expect("e < order").to_string(),
            }),
            Err(err) => Some(StepFailure {
                exponent: 0,
                difference: format!("error: {err}"),
            }),
        };
        StepOutcome {
            label: self.label.clone(),
            order: self.order(),
            modulus: self.modulus,
            failure,
        }
    }
}

/// One shared expansion of `f1`; every `f_k` is obtained from it by
/// `q -> q^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesBasis {
    f1: Series,
}

const PED_9N7: &str = "f1^-11 * f2^4 * f3^6 * f4^1";

fn quotient(text: &str) -> EtaQuotient {
    text.parse().expect("built-in eta quotient is well formed")
}

impl SeriesBasis {
    pub fn new(order: usize) -> Self {
        Self {
            f1: pochhammer(1, order),
        }
    }

    /// Use a caller-provided `f1` expansion (e.g. a deliberately corrupted one).
    pub fn from_f1(f1: Series) -> Self {
        Self { f1 }
    }

    pub fn f1(&self) -> &Series {
        &self.f1
    }

    pub fn f(&self, k: usize, domain: Domain, order: usize) -> Result<Series, SeriesError> {
        let fk = self.f1.scale_exponent(k)?.truncate(order);
        match domain {
            Domain::Exact => Ok(fk),
            Domain::Modular(m) => fk.reduce_mod(m),
        }
    }

    pub fn eta(
        &self,
        q: &EtaQuotient,
        domain: Domain,
        order: usize,
    ) -> Result<Series, SeriesError> {
        q.expand_with(domain, order, |k| self.f(k, domain, order))
    }

    /// `12 f2^4 f3^6 f4 / f1^11`, the generating function of ped(9n+7).
    pub fn ped_9n7(&self, order: usize) -> Result<Series, SeriesError> {
        Ok(self
            .eta(&quotient(PED_9N7), Domain::Exact, order)?
            .scalar_mul(12))
    }

    /// `12 f1 f6 f12` in the given domain.
    pub fn twelve_f1_f6_f12(&self, domain: Domain, order: usize) -> Result<Series, SeriesError> {
        Ok(self
            .eta(&EtaQuotient::new([(1, 1), (6, 1), (12, 1)]), domain, order)?
            .scalar_mul(12))
    }

    /// `12 q^3 f5 f30 f60` in the given domain.
    pub fn twelve_q3_f5_f30_f60(
        &self,
        domain: Domain,
        order: usize,
    ) -> Result<Series, SeriesError> {
        let body = self.eta(
            &EtaQuotient::new([(5, 1), (30, 1), (60, 1)]),
            domain,
            order.saturating_sub(3),
        )?;
        Ok(body.scalar_mul(12).shift(3).truncate(order))
    }
}

const MOD24: Domain = Domain::Modular(24);

/// `f1 = f25 (R(q^5) - q - q^2 R(q^5)^-1)`, exact.
pub fn five_dissection_step(
    basis: &SeriesBasis,
    order: usize,
) -> Result<ProofStep, DissectionError> {
    let f25 = basis.f(25, Domain::Exact, order)?;
    Ok(ProofStep::new(
        "five-dissection of f1: f1 = f25 (R(q^5) - q - q^2/R(q^5))",
        basis.f1().truncate(order),
        five_dissection_of_f1(&f25, order)?,
        None,
    ))
}

/// `sum ped(9n+7) q^n = 12 f2^4 f3^6 f4 / f1^11`, left side from an exact
/// oracle table covering `9(order-1)+7`.
pub fn ped_9n7_step(
    basis: &SeriesBasis,
    exact: &PedTable,
    order: usize,
) -> Result<ProofStep, DissectionError> {
    let lhs = exact.as_series().dissect(9, 7)?.truncate(order);
    if lhs.order() < order {
        return Err(PartitionError::TableTooShort {
            needed: (9 * order).saturating_sub(2) as u64,
            available: exact.n_max() as u64,
        }
        .into());
    }
    Ok(ProofStep::new(
        "generating function of ped(9n+7) = 12 f2^4 f3^6 f4 / f1^11",
        lhs,
        basis.ped_9n7(order)?,
        None,
    ))
}

/// `12 f2^4 f3^6 f4 / f1^11 ≡ 0 (mod 12)`.
pub fn ped_9n7_mod12_step(basis: &SeriesBasis, order: usize) -> Result<ProofStep, DissectionError> {
    Ok(ProofStep::new(
        "ped(9n+7) ≡ 0 (mod 12)",
        basis.ped_9n7(order)?,
        Series::zero(Domain::Exact, order),
        Some(12),
    ))
}

/// `12 f2^4 f3^6 f4 / f1^11 ≡ 12 f1 f6 f12 (mod modulus)`, checked on the
/// exact difference. Holds for `modulus = 24`.
pub fn reduction_step(
    basis: &SeriesBasis,
    order: usize,
    modulus: u64,
) -> Result<ProofStep, DissectionError> {
    Ok(ProofStep::new(
        format!("12 f2^4 f3^6 f4 / f1^11 ≡ 12 f1 f6 f12 (mod {modulus})"),
        basis.ped_9n7(order)?,
        basis.twelve_f1_f6_f12(Domain::Exact, order)?,
        Some(modulus),
    ))
}

/// The `q^(5n+4)` class of `12 f1 f6 f12` (mod 24), i.e. the series of
/// ped(45n+43) mod 24, to `order`.
pub fn ped_45n43_series(basis: &SeriesBasis, order: usize) -> Result<Series, DissectionError> {
    Ok(basis
        .twelve_f1_f6_f12(MOD24, 5 * order + 4)?
        .dissect(5, 4)?
        .truncate(order))
}

/// `sum ped(45n+43) q^n ≡ 12 q^3 f5 f30 f60 (mod 24)`.
pub fn extraction_step(basis: &SeriesBasis, order: usize) -> Result<ProofStep, DissectionError> {
    Ok(ProofStep::new(
        "q^(5n+4) extraction: ped(45n+43) series ≡ 12 q^3 f5 f30 f60 (mod 24)",
        ped_45n43_series(basis, order)?,
        basis.twelve_q3_f5_f30_f60(MOD24, order)?,
        Some(24),
    ))
}

/// Residues `r` whose `q^(5n+r)` class of the ped(45n+43) series vanishes,
/// with the offset `B = 45r + 43` of the matching `ped(225n + B)`.
pub const VANISHING_RESIDUES: [(usize, u64); 4] = [(0, 43), (1, 88), (2, 133), (4, 223)];

/// The four classes `r ∈ {0,1,2,4}` of the ped(45n+43) series vanish mod 24.
pub fn vanishing_class_steps(
    basis: &SeriesBasis,
    order: usize,
) -> Result<Vec<ProofStep>, DissectionError> {
    let series = ped_45n43_series(basis, order)?;
    VANISHING_RESIDUES
        .iter()
        .map(|&(r, offset)| {
            let class = series.dissect(5, r)?;
            let zero = Series::zero(MOD24, class.order());
            Ok(ProofStep::new(
                format!("ped(225n+{offset}) ≡ 0 (mod 24), series level"),
                class,
                zero,
                Some(24),
            ))
        })
        .collect()
}

/// The `q^(5n+3)` class of `12 q^3 f5 f30 f60` returns `12 f1 f6 f12` (mod 24).
pub fn self_similarity_series_step(
    basis: &SeriesBasis,
    order: usize,
) -> Result<ProofStep, DissectionError> {
    let lhs = basis
        .twelve_q3_f5_f30_f60(MOD24, 5 * order + 3)?
        .dissect(5, 3)?
        .truncate(order);
    Ok(ProofStep::new(
        "q^(5n+3) extraction: ped(225n+178) series ≡ 12 f1 f6 f12 (mod 24)",
        lhs,
        basis.twelve_f1_f6_f12(MOD24, order)?,
        Some(24),
    ))
}

/// `sum_{n <= n_limit} ped(step n + offset) q^n` (mod 24) from an oracle table.
fn oracle_progression(
    table: &Series,
    p: Progression,
    n_limit: u64,
) -> Result<Series, DissectionError> {
    let needed = p.at(n_limit).ok_or(PartitionError::Overflow)?;
    let available = table.order().saturating_sub(1) as u64;
    if table.order() == 0 || needed > available {
        return Err(PartitionError::TableTooShort { needed, available }.into());
    }
    Ok(table
        .dissect(p.step as usize, p.offset as usize)?
        .truncate(n_limit as usize + 1)
        .reduce_mod(24)?)
}

fn oracle_match_step(
    label: String,
    table: &PedTable,
    p: Progression,
    n_limit: u64,
) -> Result<ProofStep, DissectionError> {
    let t = table.as_series();
    Ok(ProofStep::new(
        label,
        oracle_progression(t, p, n_limit)?,
        oracle_progression(t, Progression::new(9, 7), n_limit)?,
        Some(24),
    ))
}

/// `ped(225n+178) ≡ ped(9n+7) (mod 24)` for `n <= n_limit`, straight from the
/// oracle table (exact or with modulus divisible by 24).
pub fn self_similarity_oracle_step(
    table: &PedTable,
    n_limit: u64,
) -> Result<ProofStep, DissectionError> {
    oracle_match_step(
        format!("ped(225n+178) ≡ ped(9n+7) (mod 24), oracle n <= {n_limit}"),
        table,
        Progression::new(225, 178),
        n_limit,
    )
}

/// Oracle check of the `k`-th member of the theorem family.
pub fn family_oracle_step(
    k: u32,
    table: &PedTable,
    n_limit: u64,
) -> Result<ProofStep, DissectionError> {
    let p = family_offset(FamilyKind::Theorem, k)?.progression;
    oracle_match_step(
        format!("ped({p}) ≡ ped(9n+7) (mod 24), oracle n <= {n_limit} [k={k}]"),
        table,
        p,
        n_limit,
    )
}

/// The closed-form family progression equals `k` iterations of the
/// self-similarity map.
pub fn family_offset_algebra_step(k: u32) -> Result<ProofStep, DissectionError> {
    let closed = family_offset(FamilyKind::Theorem, k)?.progression;
    let iterated = theorem_family_by_iteration(k)?;
    let as_series = |p: Progression| Series::from_ints(&[p.step as i64, p.offset as i64]);
    Ok(ProofStep::new(
        format!("family offset k={k}: (57*25^k - 1)/8 = 9*19*(1 + ... + 25^(k-1)) + 7"),
        as_series(closed),
        as_series(iterated),
        None,
    ))
}

/// Exact tables needed by [`ped_9n7_step`] at `order`.
pub fn exact_table_size(order: usize) -> usize {
    (9 * order).saturating_sub(2)
}

pub fn verify_five_dissection(order: usize) -> Result<ProofStep, DissectionError> {
    five_dissection_step(&SeriesBasis::new(order), order)
}

pub fn verify_ped9n7_generating_function(order: usize) -> Result<ProofStep, DissectionError> {
    let table = ped_table(exact_table_size(order), Domain::Exact);
    ped_9n7_step(&SeriesBasis::new(order), &table, order)
}

pub fn verify_mod24_reduction(order: usize) -> Result<ProofStep, DissectionError> {
    reduction_step(&SeriesBasis::new(order), order, 24)
}

pub fn verify_extraction_5n4(order: usize) -> Result<ProofStep, DissectionError> {
    extraction_step(&SeriesBasis::new(5 * order + 5), order)
}

/// Series-level and oracle-level checks of `ped(9n+7) ≡ ped(225n+178)`.
pub fn verify_self_similarity(
    order: usize,
    n_limit: u64,
) -> Result<Vec<ProofStep>, DissectionError> {
    let basis = SeriesBasis::new(5 * order + 5);
    let table = ped_table(225 * n_limit as usize + 178, MOD24);
    Ok(vec![
        self_similarity_series_step(&basis, order)?,
        self_similarity_oracle_step(&table, n_limit)?,
    ])
}

/// Oracle scan and offset algebra for the `k`-th family member.
pub fn verify_family(k: u32, n_limit: u64) -> Result<Vec<ProofStep>, DissectionError> {
    let p = family_offset(FamilyKind::Theorem, k)?.progression;
    let n_max = p.at(n_limit).ok_or(PartitionError::Overflow)?;
    let table = ped_table(n_max as usize, MOD24);
    Ok(vec![
        family_oracle_step(k, &table, n_limit)?,
        family_offset_algebra_step(k)?,
    ])
}

/// Configuration of the full chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofChain {
    /// Series order for each identity step.
    pub order: usize,
    /// `n` range of the oracle self-similarity scan.
    pub oracle_limit: u64,
    /// `(k, n_limit)` for each theorem-family oracle scan.
    pub families: Vec<(u32, u64)>,
}

impl Default for ProofChain {
    fn default() -> Self {
        Self {
            order: 400,
            oracle_limit: 100,
            families: vec![(1, 100), (2, 10)],
        }
    }
}

/// Shared, immutable inputs of a chain run.
#[derive(Debug, Clone)]
pub struct ChainInputs {
    pub basis: SeriesBasis,
    pub exact: PedTable,
    pub oracle: PedTable,
}

type Builder<'a> = (
    &'static str,
    Box<dyn Fn() -> Result<Vec<ProofStep>, DissectionError> + Sync + Send + 'a>,
);

impl ProofChain {
    pub fn with_order(order: usize) -> Self {
        Self {
            order,
            ..Self::default()
        }
    }

    /// Order of the shared `f1` expansion: the `q^(5n+4)` extraction reads
    /// up to exponent `5 * order + 4`.
    pub fn basis_order(&self) -> usize {
        5 * self.order + 5
    }

    pub fn oracle_n_max(&self) -> Result<u64, DissectionError> {
        let mut n_max = Progression::new(225, 178)
            .at(self.oracle_limit)
            .ok_or(PartitionError::Overflow)?;
        for &(k, n_limit) in &self.families {
            let p = family_offset(FamilyKind::Theorem, k)?.progression;
            n_max = n_max.max(p.at(n_limit).ok_or(PartitionError::Overflow)?);
        }
        Ok(n_max)
    }

    pub fn prepare(&self) -> Result<ChainInputs, DissectionError> {
        Ok(ChainInputs {
            basis: SeriesBasis::new(self.basis_order()),
            exact: ped_table(exact_table_size(self.order), Domain::Exact),
            oracle: ped_table(self.oracle_n_max()? as usize, MOD24),
        })
    }

    pub fn run(&self, exec: Execution) -> Result<Vec<StepOutcome>, DissectionError> {
        Ok(self.run_with(&self.prepare()?, exec))
    }

    /// Run every step against prepared inputs. Steps that cannot be built
    /// are reported as failures, never dropped.
    pub fn run_with(&self, inputs: &ChainInputs, exec: Execution) -> Vec<StepOutcome> {
        let n = self.order;
        let basis = &inputs.basis;
        let mut builders: Vec<Builder<'_>> = vec![
            (
                "five-dissection of f1",
                Box::new(move || Ok(vec![five_dissection_step(basis, self.basis_order())?])),
            ),
            (
                "ped(9n+7) generating function",
                Box::new(move || Ok(vec![ped_9n7_step(basis, &inputs.exact, n)?])),
            ),
            (
                "ped(9n+7) mod 12",
                Box::new(move || Ok(vec![ped_9n7_mod12_step(basis, n)?])),
            ),
            (
                "mod 24 reduction",
                Box::new(move || Ok(vec![reduction_step(basis, n, 24)?])),
            ),
            (
                "q^(5n+4) extraction",
                Box::new(move || Ok(vec![extraction_step(basis, n)?])),
            ),
            (
                "vanishing classes",
                Box::new(move || vanishing_class_steps(basis, n)),
            ),
            (
                "q^(5n+3) extraction",
                Box::new(move || Ok(vec![self_similarity_series_step(basis, n)?])),
            ),
            (
                "self-similarity oracle",
                Box::new(move || {
                    Ok(vec![self_similarity_oracle_step(
                        &inputs.oracle,
                        self.oracle_limit,
                    )?])
                }),
            ),
        ];
        for &(k, n_limit) in &self.families {
            builders.push((
                "theorem family",
                Box::new(move || {
                    Ok(vec![
                        family_oracle_step(k, &inputs.oracle, n_limit)?,
                        family_offset_algebra_step(k)?,
                    ])
                }),
            ));
        }
        exec.map_slice(&builders, |(name, build)| match build() {
            Ok(steps) => steps.iter().map(ProofStep::check).collect(),
            Err(err) => vec![StepOutcome::broken(name, &err)],
        })
        .into_iter()
        .flatten()
        .collect()
    }
}
