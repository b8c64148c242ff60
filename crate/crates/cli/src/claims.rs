//! Claim files and the built-in claim sets.
//!
//! One entry per line; `#` starts a comment.
//!
//! ```text
//! # A B M status label...
//! 225 43 24 theorem ped(225n+43) ≡ 0 (mod 24)
//! # family KIND FROM TO [max-n N]
//! family theorem 1 2
//! ```
//!
//! A claim line without a label gets a generated one. Family kinds are
//! `theorem`, `ahs1`, `ahs2` and `ahs3`; `max-n` caps the scanned range for
//! that directive regardless of the global `--n-limit`.

use pedlab_core::partitions::{family_claim, ClaimStatus, CongruenceClaim, FamilyKind};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDirective {
    pub kind: FamilyKind,
    pub from: u32,
    pub to: u32,
    pub max_n: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimFile {
    pub claims: Vec<CongruenceClaim>,
    pub families: Vec<FamilyDirective>,
}

/// A claim ready to check, with an optional cap on its `n` range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimEntry {
    pub claim: CongruenceClaim,
    pub max_n: Option<u64>,
}

impl ClaimEntry {
    pub fn n_limit(&self, global: u64) -> u64 {
        self.max_n.map_or(global, |cap| cap.min(global))
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::ClaimParse {
        line,
        msg: msg.into(),
    }
}

fn number<T: std::str::FromStr>(
    line: usize,
    what: &str,
    token: Option<&str>,
) -> Result<T, CliError> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{token}`")))
}

fn parse_family(line: usize, tokens: &[&str]) -> Result<FamilyDirective, CliError> {
    let mut it = tokens.iter().copied();
    let kind_name = it
        .next()
        .ok_or_else(|| parse_err(line, "missing family kind"))?;
    let kind = FamilyKind::from_name(kind_name)
        .ok_or_else(|| parse_err(line, format!("unknown family kind `{kind_name}`")))?;
    let from: u32 = number(line, "family start", it.next())?;
    let to: u32 = number(line, "family end", it.next())?;
    if from < 1 || to < from {
        return Err(parse_err(line, format!("bad family range {from}..{to}")));
    }
    let max_n = match it.next() {
        None => None,
        Some("max-n") => Some(number(line, "max-n", it.next())?),
        Some(other) => return Err(parse_err(line, format!("unknown field `{other}`"))),
    };
    if let Some(extra) = it.next() {
        return Err(parse_err(line, format!("unknown field `{extra}`")));
    }
    Ok(FamilyDirective {
        kind,
        from,
        to,
        max_n,
    })
}

fn parse_claim(line: usize, text: &str) -> Result<CongruenceClaim, CliError> {
    let mut parts = text.splitn(5, char::is_whitespace);
    let step: u64 = number(line, "step A", parts.next())?;
    let offset: u64 = number(line, "offset B", parts.next())?;
    let modulus: u64 = number(line, "modulus M", parts.next())?;
    let status = match parts.next() {
        Some("theorem") => ClaimStatus::Theorem,
        Some("conjecture") => ClaimStatus::Conjecture,
        Some(other) => return Err(parse_err(line, format!("unknown status `{other}`"))),
        None => return Err(parse_err(line, "missing status")),
    };
    if step == 0 {
        return Err(parse_err(line, "step A must be positive"));
    }
    if modulus < 2 {
        return Err(parse_err(line, "modulus M must be at least 2"));
    }
    let claim = CongruenceClaim::vanishing(step, offset, modulus, status);
    Ok(
        match parts.next().map(str::trim).filter(|l| !l.is_empty()) {
            Some(label) => claim.with_label(label),
            None => claim,
        },
    )
}

impl ClaimFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut file = ClaimFile {
            claims: Vec::new(),
            families: Vec::new(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if tokens[0] == "family" {
                file.families.push(parse_family(line, &tokens[1..])?);
            } else {
                file.claims.push(parse_claim(line, body)?);
            }
        }
        if file.claims.is_empty() && file.families.is_empty() {
            return Err(CliError::EmptyClaimFile);
        }
        Ok(file)
    }

    /// Plain claims first, then family members in directive order.
    pub fn entries(&self) -> Result<Vec<ClaimEntry>, CliError> {
        let mut out: Vec<ClaimEntry> = self
            .claims
            .iter()
            .cloned()
            .map(|claim| ClaimEntry { claim, max_n: None })
            .collect();
        for d in &self.families {
            for param in d.from..=d.to {
                out.push(ClaimEntry {
                    claim: family_claim(d.kind, param)?,
                    max_n: d.max_n,
                });
            }
        }
        Ok(out)
    }
}

const AHS: &str = "\
3 2 2 theorem
9 4 4 theorem
9 7 12 theorem
family ahs1 1 1
family ahs2 1 1
family ahs3 1 1
";

// k = 2 already reaches index 5625n + 4453; cap it so the default table
// stays near 60k entries
const THEOREM1: &str = "\
225 43 24 theorem
225 88 24 theorem
225 133 24 theorem
225 223 24 theorem
family theorem 1 1
family theorem 2 2 max-n 10
";

const CONJECTURE192: &str = "\
225 43 192 conjecture
225 88 192 conjecture
225 133 192 conjecture
225 223 192 conjecture
";

pub const BUILTIN_SETS: [&str; 4] = ["ahs", "theorem1", "conjecture192", "all"];

/// Claim-file text of a built-in set.
pub fn builtin_text(name: &str) -> Option<String> {
    Some(match name {
        "ahs" => AHS.to_string(),
        "theorem1" => THEOREM1.to_string(),
        "conjecture192" => CONJECTURE192.to_string(),
        "all" => [AHS, THEOREM1, CONJECTURE192].concat(),
        _ => return None,
    })
}

pub fn builtin(name: &str) -> Result<ClaimFile, CliError> {
    let text = builtin_text(name).ok_or_else(|| CliError::UnknownSet(name.to_string()))?;
    ClaimFile::parse(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pedlab_core::partitions::{Progression, Target};

    #[test]
    fn parses_claims_and_families() {
        let file = ClaimFile::parse(
            "# header\n\n225 43 24 theorem my label here  \n3 2 2 conjecture\nfamily theorem 1 2 max-n 10 # tail\n",
        )
        .unwrap();
        assert_eq!(file.claims.len(), 2);
        assert_eq!(file.claims[0].label, "my label here");
        assert_eq!(file.claims[1].label, "ped(3n+2) ≡ 0 (mod 2)");
        assert_eq!(file.claims[1].status, ClaimStatus::Conjecture);
        assert_eq!(
            file.families,
            vec![FamilyDirective {
                kind: FamilyKind::Theorem,
                from: 1,
                to: 2,
                max_n: Some(10)
            }]
        );
        let entries = file.entries().unwrap();
        assert_eq!(entries.len(), 4);
        assert_eq!(entries[3].claim.progression, Progression::new(5625, 4453));
        assert_eq!(
            entries[3].claim.target,
            Target::Matches(Progression::new(9, 7))
        );
        assert_eq!(entries[3].n_limit(100), 10);
        assert_eq!(entries[0].n_limit(100), 100);
    }

    #[test]
    fn rejects_malformed_lines() {
        for bad in [
            "225 43 24 lemma",
            "225 x 24 theorem",
            "225 43",
            "0 1 2 theorem",
            "3 2 1 theorem",
            "family theorem 1",
            "family theorem 2 1",
            "family sixes 1 1",
            "family theorem 1 1 max-n",
            "family theorem 1 1 colour blue",
            "family theorem 1 1 max-n 5 extra",
        ] {
            assert!(
                matches!(
                    ClaimFile::parse(bad),
                    Err(CliError::ClaimParse { line: 1, .. })
                ),
                "{bad}"
            );
        }
        assert!(matches!(
            ClaimFile::parse("# nothing\n"),
            Err(CliError::EmptyClaimFile)
        ));
    }

    #[test]
    fn builtin_sets_parse() {
        for name in BUILTIN_SETS {
            assert!(
                !builtin(name).unwrap().entries().unwrap().is_empty(),
                "{name}"
            );
        }
        assert_eq!(builtin("theorem1").unwrap().entries().unwrap().len(), 6);
        assert_eq!(builtin("ahs").unwrap().entries().unwrap().len(), 6);
        assert!(matches!(builtin("nope"), Err(CliError::UnknownSet(_))));
    }
}
