//! Combinatorial ground truth for ped(n), independent of any q-series code,
//! and the congruence claims checked against it.

use std::fmt;
use std::io::{self, Write};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exec::Execution;
use crate::series::{Coeff, Domain, Series};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("table holds n <= {available}, claim needs n = {needed}")]
    TableTooShort { needed: u64, available: u64 },
    #[error("table modulus {table} is not a multiple of claim modulus {claim}")]
    IncompatibleModulus { table: u64, claim: u64 },
    #[error("claim modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("family parameter must be at least 1")]
    ParameterTooSmall,
    #[error("progression index overflows u64")]
    Overflow,
    #[error("offset numerator {0} is not divisible by 8")]
    InexactDivision(u128),
}

/// ped(0..=n_max), exact or reduced modulo one modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PedTable {
    values: Series,
}

impl PedTable {
    pub fn n_max(&self) -> usize {
        self.values.order() - 1
    }

    pub fn domain(&self) -> Domain {
        self.values.domain()
    }

    pub fn get(&self, n: usize) -> Option<Coeff> {
        self.values.coeff(n)
    }

    /// ped(n) mod `modulus`; the table must be exact or hold a multiple of
    /// `modulus`.
    pub fn residue(&self, n: usize, modulus: u64) -> Option<u64> {
        self.values.residue_at(n, modulus)
    }

    /// The table as the generating series `sum ped(n) q^n`, known to
    /// `n_max + 1`.
    pub fn as_series(&self) -> &Series {
        &self.values
    }

    /// One `n<TAB>ped(n)` line per entry.
    pub fn write_text<W: Write>(&self, mut out: W) -> io::Result<()> {
        for n in 0..=self.n_max() {
            writeln!(out, "{n}\t{}", self.get(n).expect("n <= n_max"))?;
        }
        Ok(())
    }

    fn covers(&self, index: u64) -> Result<(), PartitionError> {
        if index > self.n_max() as u64 {
            Err(PartitionError::TableTooShort {
                needed: index,
                available: self.n_max() as u64,
            })
        } else {
            Ok(())
        }
    }
}

/// `t[n] += t[n - p]` for ascending `n` (part `p` used any number of times).
/// Runs in blocks of length `p` so each block reads a finished, disjoint slice.
fn unbounded_pass<T>(t: &mut [T], p: usize, add: impl Fn(&mut T, &T)) {
    for start in (p..t.len()).step_by(p) {
        let (done, rest) = t.split_at_mut(start);
        let src = &done[start - p..];
        for (dst, s) in rest.iter_mut().take(p).zip(src) {
            add(dst, s);
        }
    }
}

/// `t[n] += t[n - p]` for descending `n` (part `p` used at most once).
fn zero_one_pass<T>(t: &mut [T], p: usize, add: impl Fn(&mut T, &T)) {
    for start in (p..t.len()).step_by(p).rev() {
        let (below, rest) = t.split_at_mut(start);
        let src = &below[start - p..];
        for (dst, s) in rest.iter_mut().take(p).zip(src) {
            add(dst, s);
        }
    }
}

fn knapsack_table(
    n_max: usize,
    domain: Domain,
    passes: impl Fn(&mut dyn FnMut(usize, bool)),
) -> PedTable {
    let len = n_max + 1;
    let values = match domain {
        Domain::Exact => {
            let mut t = vec![BigInt::zero(); len];
            t[0] = BigInt::one();
            passes(&mut |p, unbounded| {
                let add = |d: &mut BigInt, s: &BigInt| *d += s;
                if unbounded {
                    unbounded_pass(&mut t, p, add)
                } else {
                    zero_one_pass(&mut t, p, add)
                }
            });
            Series::exact(t)
        }
        Domain::Modular(m) => {
            assert!(m >= 2, "table modulus must be at least 2");
            let mut t = vec![0u64; len];
            t[0] = 1 % m;
            let add = move |d: &mut u64, s: &u64| {
                let x = *d + *s;
                *d = if x >= m { x - m } else { x };
            };
            passes(&mut |p, unbounded| {
                if unbounded {
                    unbounded_pass(&mut t, p, add)
                } else {
                    zero_one_pass(&mut t, p, add)
                }
            });
            Series::modular(t, m).expect("modulus checked")
        }
    };
    PedTable { values }
}

/// ped(n) for `n <= n_max`: odd parts unrestricted (unbounded knapsack),
/// then even parts at most once each (0/1 knapsack).
pub fn ped_table(n_max: usize, domain: Domain) -> PedTable {
    knapsack_table(n_max, domain, |pass| {
        for p in (1..=n_max).step_by(2) {
            pass(p, true);
        }
        for p in (2..=n_max).step_by(2) {
            pass(p, false);
        }
    })
}

/// Partitions of n into parts not divisible by 4.
pub fn four_regular_table(n_max: usize, domain: Domain) -> PedTable {
    knapsack_table(n_max, domain, |pass| {
        for p in (1..=n_max).filter(|p| p % 4 != 0) {
            pass(p, true);
        }
    })
}

/// The arithmetic progression `step * n + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Progression {
    pub step: u64,
    pub offset: u64,
}

impl Progression {
    pub fn new(step: u64, offset: u64) -> Self {
        Self { step, offset }
    }

    pub fn at(&self, n: u64) -> Option<u64> {
        self.step.checked_mul(n)?.checked_add(self.offset)
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}n+{}", self.step, self.offset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimStatus {
    Theorem,
    Conjecture,
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClaimStatus::Theorem => "theorem",
            ClaimStatus::Conjecture => "conjecture",
        })
    }
}

/// Right-hand side of a claimed congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// `ped(An+B) ≡ 0`
    Zero,
    /// `ped(An+B) ≡ ped(Cn+D)`
    Matches(Progression),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruenceClaim {
    pub progression: Progression,
    pub modulus: u64,
    pub status: ClaimStatus,
    pub target: Target,
    pub label: String,
}

impl CongruenceClaim {
    /// `ped(step*n + offset) ≡ 0 (mod modulus)`, labelled in that form.
    pub fn vanishing(step: u64, offset: u64, modulus: u64, status: ClaimStatus) -> Self {
        let progression = Progression::new(step, offset);
        Self {
            progression,
            modulus,
            status,
            target: Target::Zero,
            label: format!("ped({progression}) ≡ 0 (mod {modulus})"),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Largest table index needed to check `0 <= n <= n_limit`.
    pub fn max_index(&self, n_limit: u64) -> Option<u64> {
        let lhs = self.progression.at(n_limit)?;
        Some(match self.target {
            Target::Zero => lhs,
            Target::Matches(p) => lhs.max(p.at(n_limit)?),
        })
    }
}

/// Smallest `n` at which a claim fails, and the offending residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Witness {
    pub n: u64,
    /// `ped(An+B)` (minus the target value, for matching claims) mod M.
    pub residue: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    /// Held on the scanned range, but the claim is only conjectured.
    EmpiricalPass,
    Fail(Witness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimCheck {
    pub label: String,
    pub status: ClaimStatus,
    pub n_limit: u64,
    pub verdict: Verdict,
}

impl ClaimCheck {
    pub fn failed(&self) -> bool {
        matches!(self.verdict, Verdict::Fail(_))
    }

    pub fn note(&self) -> String {
        match self.verdict {
            Verdict::Pass => format!("verified for 0 <= n <= {}", self.n_limit),
            Verdict::EmpiricalPass => {
                format!(
                    "empirically verified up to n = {}, not proven",
                    self.n_limit
                )
            }
            Verdict::Fail(w) => format!("fails at n = {} (residue {})", w.n, w.residue),
        }
    }
}

/// Scan `0 <= n <= n_limit` for the first `n` violating the claim.
pub fn check_claim(
    claim: &CongruenceClaim,
    table: &PedTable,
    n_limit: u64,
) -> Result<ClaimCheck, PartitionError> {
    let m = claim.modulus;
    if m < 2 {
        return Err(PartitionError::BadModulus(m));
    }
    if let Domain::Modular(tm) = table.domain() {
        if tm % m != 0 {
            return Err(PartitionError::IncompatibleModulus {
                table: tm,
                claim: m,
            });
        }
    }
    table.covers(claim.max_index(n_limit).ok_or(PartitionError::Overflow)?)?;

    let value = |idx: u64| table.residue(idx as usize, m).expect("index covered");
    let witness = (0..=n_limit).find_map(|n| {
        let lhs = value(claim.progression.at(n)?);
        let residue = match claim.target {
            Target::Zero => lhs,
            Target::Matches(p) => (lhs + m - value(p.at(n)?)) % m,
        };
        (residue != 0).then_some(Witness { n, residue })
    });

    let verdict = match (witness, claim.status) {
        (Some(w), _) => Verdict::Fail(w),
        (None, ClaimStatus::Theorem) => Verdict::Pass,
        (None, ClaimStatus::Conjecture) => Verdict::EmpiricalPass,
    };
    Ok(ClaimCheck {
        label: claim.label.clone(),
        status: claim.status,
        n_limit,
        verdict,
    })
}

/// Check many `(claim, n_limit)` pairs against one shared table.
pub fn check_claims(
    claims: &[(CongruenceClaim, u64)],
    table: &PedTable,
    exec: Execution,
) -> Vec<Result<ClaimCheck, PartitionError>> {
    exec.map_slice(claims, |(claim, n_limit)| {
        check_claim(claim, table, *n_limit)
    })
}

/// Infinite congruence families, indexed by k (or alpha) >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// `ped(9*25^k n + (57*25^k - 1)/8) ≡ ped(9n+7) (mod 24)`
    Theorem,
    /// `ped(3^(2a+2) n + (11*3^(2a+1) - 1)/8) ≡ 0 (mod 2)`
    Ahs1,
    /// `ped(3^(2a+1) n + (17*3^(2a) - 1)/8) ≡ 0 (mod 6)`
    Ahs2,
    /// `ped(3^(2a+2) n + (19*3^(2a+1) - 1)/8) ≡ 0 (mod 6)`
    Ahs3,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::Theorem,
        FamilyKind::Ahs1,
        FamilyKind::Ahs2,
        FamilyKind::Ahs3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Theorem => "theorem",
            FamilyKind::Ahs1 => "ahs1",
            FamilyKind::Ahs2 => "ahs2",
            FamilyKind::Ahs3 => "ahs3",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// A family member: `ped(step*n + offset)` taken modulo `modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilyMember {
    pub progression: Progression,
    pub modulus: u64,
}

fn exact_eighth(numerator: u128) -> Result<u128, PartitionError> {
    if numerator.is_multiple_of(8) {
        Ok(numerator / 8)
    } else {
        Err(PartitionError::InexactDivision(numerator))
    }
}

/// Progression and modulus of the given family member.
pub fn family_offset(kind: FamilyKind, param: u32) -> Result<FamilyMember, PartitionError> {
    if param < 1 {
        return Err(PartitionError::ParameterTooSmall);
    }
    let pow = |base: u128, e: u32| base.checked_pow(e).ok_or(PartitionError::Overflow);
    let mul = |a: u128, b: u128| a.checked_mul(b).ok_or(PartitionError::Overflow);
    let (step, numerator, modulus) = match kind {
        FamilyKind::Theorem => {
            let p = pow(25, param)?;
            (mul(9, p)?, mul(57, p)? - 1, 24)
        }
        FamilyKind::Ahs1 => (
            pow(3, 2 * param + 2)?,
            mul(11, pow(3, 2 * param + 1)?)? - 1,
            2,
        ),
        FamilyKind::Ahs2 => (pow(3, 2 * param + 1)?, mul(17, pow(3, 2 * param)?)? - 1, 6),
        FamilyKind::Ahs3 => (
            pow(3, 2 * param + 2)?,
            mul(19, pow(3, 2 * param + 1)?)? - 1,
            6,
        ),
    };
    let offset = exact_eighth(numerator)?;
    let narrow = |x: u128| u64::try_from(x).map_err(|_| PartitionError::Overflow);
    Ok(FamilyMember {
        progression: Progression::new(narrow(step)?, narrow(offset)?),
        modulus,
    })
}

/// The progression of the theorem family obtained by composing the map
/// `n -> 25n + 19` (in `9n+7` coordinates) `k` times, i.e. offset
/// `9*19*(1 + 25 + ... + 25^(k-1)) + 7`.
pub fn theorem_family_by_iteration(k: u32) -> Result<Progression, PartitionError> {
    if k < 1 {
        return Err(PartitionError::ParameterTooSmall);
    }
    let (mut scale, mut shift) = (1u64, 0u64);
    for _ in 0..k {
        scale = scale.checked_mul(25).ok_or(PartitionError::Overflow)?;
        shift = shift
            .checked_mul(25)
            .and_then(|s| s.checked_add(19))
            .ok_or(PartitionError::Overflow)?;
    }
    let step = scale.checked_mul(9).ok_or(PartitionError::Overflow)?;
    let offset = shift
        .checked_mul(9)
        .and_then(|s| s.checked_add(7))
        .ok_or(PartitionError::Overflow)?;
    Ok(Progression::new(step, offset))
}

/// The claim asserted by a family member.
pub fn family_claim(kind: FamilyKind, param: u32) -> Result<CongruenceClaim, PartitionError> {
    let member = family_offset(kind, param)?;
    let p = member.progression;
    let m = member.modulus;
    Ok(match kind {
        FamilyKind::Theorem => {
            let base = Progression::new(9, 7);
            CongruenceClaim {
                progression: p,
                modulus: m,
                status: ClaimStatus::Theorem,
                target: Target::Matches(base),
                label: format!("ped({p}) ≡ ped({base}) (mod {m}) [theorem family, k={param}]"),
            }
        }
        _ => CongruenceClaim::vanishing(p.step, p.offset, m, ClaimStatus::Theorem).with_label(
            format!(
                "ped({p}) ≡ 0 (mod {m}) [{} family, alpha={param}]",
                kind.name()
            ),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(n: usize) -> Vec<i64> {
        ped_table(n, Domain::Exact)
            .as_series()
            .to_i64_vec()
            .unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(exact(7), vec![1, 1, 2, 3, 4, 6, 9, 12]);
        assert_eq!(exact(0), vec![1]);
    }

    #[test]
    fn four_regular_small() {
        let t = four_regular_table(4, Domain::Exact);
        assert_eq!(t.as_series().to_i64_vec().unwrap(), vec![1, 1, 2, 3, 4]);
    }

    #[test]
    fn modular_table_reduces_exact() {
        let e = ped_table(300, Domain::Exact);
        let m = ped_table(300, Domain::Modular(24));
        assert_eq!(e.as_series().reduce_mod(24).unwrap(), *m.as_series());
    }

    #[test]
    fn text_export() {
        let mut buf = Vec::new();
        ped_table(5, Domain::Exact).write_text(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "0\t1\n1\t1\n2\t2\n3\t3\n4\t4\n5\t6\n"
        );
    }

    #[test]
    fn claim_failure_reports_first_witness() {
        let t = ped_table(200, Domain::Exact);
        let claim = CongruenceClaim::vanishing(9, 4, 8, ClaimStatus::Theorem);
        let check = check_claim(&claim, &t, 10).unwrap();
        assert_eq!(check.verdict, Verdict::Fail(Witness { n: 0, residue: 4 }));
        assert!(check.failed());
    }

    #[test]
    fn claim_preconditions() {
        let t = ped_table(100, Domain::Modular(24));
        let too_far = CongruenceClaim::vanishing(225, 43, 24, ClaimStatus::Theorem);
        assert_eq!(
            check_claim(&too_far, &t, 1),
            Err(PartitionError::TableTooShort {
                needed: 268,
                available: 100
            })
        );
        let wrong_mod = CongruenceClaim::vanishing(3, 2, 5, ClaimStatus::Theorem);
        assert_eq!(
            check_claim(&wrong_mod, &t, 1),
            Err(PartitionError::IncompatibleModulus {
                table: 24,
                claim: 5
            })
        );
        let overflow = CongruenceClaim::vanishing(u64::MAX, 1, 2, ClaimStatus::Theorem);
        assert_eq!(check_claim(&overflow, &t, 2), Err(PartitionError::Overflow));
    }

    #[test]
    fn conjecture_never_reaches_pass() {
        let t = ped_table(300, Domain::Modular(192));
        let claim = CongruenceClaim::vanishing(3, 2, 2, ClaimStatus::Conjecture);
        let check = check_claim(&claim, &t, 50).unwrap();
        assert_eq!(check.verdict, Verdict::EmpiricalPass);
        assert!(check.note().contains("not proven"));
    }

    #[test]
    fn family_offsets() {
        let m = |k, p| family_offset(k, p).unwrap();
        assert_eq!(
            m(FamilyKind::Theorem, 1).progression,
            Progression::new(225, 178)
        );
        assert_eq!(
            m(FamilyKind::Theorem, 2).progression,
            Progression::new(5625, 4453)
        );
        assert_eq!(m(FamilyKind::Theorem, 1).modulus, 24);
        assert_eq!(m(FamilyKind::Ahs1, 1).progression, Progression::new(81, 37));
        assert_eq!(m(FamilyKind::Ahs2, 1).progression, Progression::new(27, 19));
        assert_eq!(m(FamilyKind::Ahs2, 1).modulus, 6);
        assert_eq!(m(FamilyKind::Ahs3, 1).progression, Progression::new(81, 64));
        assert_eq!(
            family_offset(FamilyKind::Theorem, 0),
            Err(PartitionError::ParameterTooSmall)
        );
        assert_eq!(
            family_offset(FamilyKind::Theorem, 40),
            Err(PartitionError::Overflow)
        );
    }

    #[test]
    fn iteration_matches_closed_form() {
        for k in 1..=12 {
            assert_eq!(
                theorem_family_by_iteration(k).unwrap(),
                family_offset(FamilyKind::Theorem, k).unwrap().progression
            );
        }
    }

    #[test]
    fn family_kind_names() {
        for kind in FamilyKind::ALL {
            assert_eq!(FamilyKind::from_name(kind.name()), Some(kind));
        }
        assert_eq!(FamilyKind::from_name("nope"), None);
    }
}
