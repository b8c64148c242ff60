use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

use pedlab_core::dissection::ProofChain;
use pedlab_core::partitions::{check_claim, ped_table, PartitionError, PedTable};
use pedlab_core::{Domain, Execution};

use crate::claims::{builtin, ClaimEntry, ClaimFile};
use crate::error::CliError;
use crate::report::{Meta, Run, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClaimSource {
    Builtin(String),
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub source: ClaimSource,
    pub n_limit: u64,
    /// Modulus of the shared ped table; every claim modulus must divide it.
    pub modulus: u64,
    /// Refuse to build a table past this index.
    pub max_index: u64,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            source: ClaimSource::Builtin("all".into()),
            n_limit: 100,
            modulus: 192,
            max_index: 250_000,
            exec: Execution::default(),
        }
    }
}

fn load_claims(source: &ClaimSource) -> Result<Vec<ClaimEntry>, CliError> {
    let file = match source {
        ClaimSource::Builtin(name) => builtin(name)?,
        ClaimSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::File {
                path: path.clone(),
                source,
            })?;
            ClaimFile::parse(&text)?
        }
    };
    file.entries()
}

fn exec_name(exec: Execution) -> &'static str {
    match exec {
        Execution::Parallel if Execution::parallel_available() => "parallel",
        _ => "sequential",
    }
}

/// Check every claim against one modular ped table.
pub fn cmd_verify(opts: &VerifyOptions) -> Result<VerificationReport, CliError> {
    let started = Instant::now();
    let entries = load_claims(&opts.source)?;
    if opts.modulus < 2 {
        return Err(PartitionError::BadModulus(opts.modulus).into());
    }

    let mut needed = 0u64;
    for e in &entries {
        if !opts.modulus.is_multiple_of(e.claim.modulus) {
            return Err(CliError::Claim {
                label: e.claim.label.clone(),
                source: PartitionError::IncompatibleModulus {
                    table: opts.modulus,
                    claim: e.claim.modulus,
                },
            });
        }
        let idx = e
            .claim
            .max_index(e.n_limit(opts.n_limit))
            .ok_or(PartitionError::Overflow)?;
        needed = needed.max(idx);
    }
    if needed > opts.max_index {
        return Err(CliError::TableTooLarge {
            needed,
            ceiling: opts.max_index,
        });
    }

    let table = ped_table(needed as usize, Domain::Modular(opts.modulus));
    let checks = opts.exec.map_slice(&entries, |e| {
        check_claim(&e.claim, &table, e.n_limit(opts.n_limit))
    });
    let mut runs = Vec::with_capacity(entries.len());
    for (entry, check) in entries.iter().zip(checks) {
        let check = check.map_err(|source| CliError::Claim {
            label: entry.claim.label.clone(),
            source,
        })?;
        runs.push(Run::from_claim(&check, entry.claim.modulus));
    }

    let mut meta = Meta::new("verify");
    match &opts.source {
        ClaimSource::Builtin(name) => meta.param("set", name),
        ClaimSource::File(path) => meta.param("claims", path.display()),
    }
    meta.param("n_limit", opts.n_limit);
    meta.param("modulus", opts.modulus);
    meta.param("table_n_max", needed);
    meta.param("execution", exec_name(opts.exec));
    meta.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(VerificationReport { meta, runs })
}

#[derive(Debug, Clone, Default)]
pub struct ProveOptions {
    pub chain: ProofChain,
    pub exec: Execution,
}

/// Run the whole identity chain.
pub fn cmd_prove(opts: &ProveOptions) -> Result<VerificationReport, CliError> {
    let started = Instant::now();
    let outcomes = opts.chain.run(opts.exec)?;
    let mut meta = Meta::new("prove");
    if opts.chain.order == 0 {
        meta.warnings.push(
            "order 0: every series comparison is empty, so those steps pass vacuously".into(),
        );
    }
    meta.param("order", opts.chain.order);
    meta.param("oracle_limit", opts.chain.oracle_limit);
    meta.param(
        "families",
        opts.chain
            .families
            .iter()
            .map(|(k, n)| format!("k={k}:n<={n}"))
            .collect::<Vec<_>>()
            .join(","),
    );
    meta.param("execution", exec_name(opts.exec));
    meta.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(VerificationReport {
        meta,
        runs: outcomes.iter().map(Run::from_step).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Json,
}

#[derive(Serialize)]
struct TableJson {
    n_max: usize,
    modulus: Option<u64>,
    /// Decimal strings; exact values outgrow every JSON number type.
    values: Vec<String>,
}

pub fn write_table<W: Write>(
    table: &PedTable,
    format: TableFormat,
    mut out: W,
) -> Result<(), CliError> {
    match format {
        TableFormat::Text => table.write_text(&mut out)?,
        TableFormat::Json => {
            let doc = TableJson {
                n_max: table.n_max(),
                modulus: match table.domain() {
                    Domain::Exact => None,
                    Domain::Modular(m) => Some(m),
                },
                values: (0..=table.n_max())
                    .map(|n| table.get(n).expect("n <= n_max").to_string())
                    .collect(),
            };
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Build ped(0..=n_max) and write it out.
pub fn cmd_table<W: Write>(
    n_max: usize,
    domain: Domain,
    format: TableFormat,
    out: W,
) -> Result<(), CliError> {
    if let Domain::Modular(m) = domain {
        if m < 2 {
            return Err(PartitionError::BadModulus(m).into());
        }
    }
    write_table(&ped_table(n_max, domain), format, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_text(n_max: usize, domain: Domain) -> String {
        let mut buf = Vec::new();
        cmd_table(n_max, domain, TableFormat::Text, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn table_examples() {
        assert_eq!(
            table_text(5, Domain::Exact),
            "0\t1\n1\t1\n2\t2\n3\t3\n4\t4\n5\t6\n"
        );
        assert_eq!(table_text(0, Domain::Exact), "0\t1\n");
        let line_43 = table_text(43, Domain::Modular(24))
            .lines()
            .nth(43)
            .unwrap()
            .to_string();
        assert_eq!(line_43, "43\t0");
    }

    #[test]
    fn table_json() {
        let mut buf = Vec::new();
        cmd_table(7, Domain::Exact, TableFormat::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["n_max"], 7);
        assert!(v["modulus"].is_null());
        assert_eq!(v["values"][7], "12");
        assert!(cmd_table(3, Domain::Modular(1), TableFormat::Json, Vec::new()).is_err());
    }

    #[test]
    fn ceiling_guard() {
        let opts = VerifyOptions {
            source: ClaimSource::Builtin("theorem1".into()),
            max_index: 1000,
            ..VerifyOptions::default()
        };
        assert!(matches!(
            cmd_verify(&opts),
            Err(CliError::TableTooLarge {
                needed: 60_703,
                ceiling: 1000
            })
        ));
    }

    #[test]
    fn incompatible_scan_modulus() {
        let opts = VerifyOptions {
            source: ClaimSource::Builtin("ahs".into()),
            modulus: 24 * 5,
            ..VerifyOptions::default()
        };
        // moduli 2, 4, 6, 12 all divide 120; 4 does not divide 10
        assert!(cmd_verify(&opts).is_ok());
        let opts = VerifyOptions {
            modulus: 10,
            ..opts
        };
        assert!(matches!(cmd_verify(&opts), Err(CliError::Claim { .. })));
    }
}
