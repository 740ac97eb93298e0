//! Readers for the QAPLIB `.dat` / `.sln` formats and the best-known registry
//! for the real-life benchmark set.
//!
//! `.dat`: whitespace-separated integers `n`, then `n*n` entries of matrix A
//! row-major, then `n*n` entries of matrix B. A becomes the flow matrix and B
//! the distance matrix, so the objective is `sum A[i][k] * B[p[i]][p[k]]`.
//!
//! `.sln`: `n objective` followed by a 1-indexed permutation.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::assignment::Assignment;
use crate::error::{QapError, Result};
use crate::instance::QapInstance;
use crate::objective::evaluate;
use crate::Cost;

/// Environment variable overriding the default data directory.
pub const DATA_DIR_ENV: &str = "QAP_DATA_DIR";

/// Default location of the bundled instances, relative to the repository root.
pub const DEFAULT_DATA_DIR: &str = "data/qaplib";

/// Best known objective values of the twelve real-life benchmark instances.
const BEST_KNOWN: [(&str, Cost); 12] = [
    ("bur26h", 7_098_658),
    ("chr12c", 11_156),
    ("chr15a", 9_896),
    ("esc128", 64),
    ("esc16i", 14),
    ("esc32h", 438),
    ("esc64a", 128),
    ("had12", 1_652),
    ("had14", 2_724),
    ("had20", 6_922),
    ("kra30b", 91_420),
    ("ste36a", 9_526),
];

/// Case-insensitive lookup of best known qualities for the benchmark set.
#[derive(Debug, Clone, Copy, Default)]
pub struct BestKnownRegistry;

impl BestKnownRegistry {
    pub fn get(&self, name: &str) -> Result<Cost> {
        best_known(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> {
        BEST_KNOWN.iter().map(|(name, _)| *name)
    }

    pub fn contains(&self, name: &str) -> bool {
        best_known(name).is_ok()
    }
}

/// Names of the benchmark instances, in the order they are reported.
pub const TABLE1_INSTANCES: [&str; 12] = [
    "bur26h", "chr12c", "chr15a", "esc128", "esc16i", "esc32h", "esc64a", "had12", "had14", "had20", "kra30b", "ste36a",
];

pub fn best_known(name: &str) -> Result<Cost> {
    let key = name.to_ascii_lowercase();
    BEST_KNOWN
        .iter()
        .find(|(n, _)| *n == key)
        .map(|&(_, v)| v)
        .ok_or_else(|| QapError::UnknownInstance {
            name: name.to_string(),
            known: BEST_KNOWN.iter().map(|(n, _)| n.to_string()).collect(),
        })
}

fn parse_tokens(text: &str) -> Result<Vec<i64>> {
    text.split_whitespace()
        .enumerate()
        .map(|(position, tok)| {
            tok.parse::<i64>().map_err(|_| QapError::Parse {
                position,
                message: format!("'{tok}' is not an integer"),
            })
        })
        .collect()
}

/// Parses a QAPLIB `.dat` instance.
pub fn parse_instance(text: &str, name: &str) -> Result<QapInstance<i64>> {
    let tokens = parse_tokens(text)?;
    let Some(&n) = tokens.first() else {
        return Err(QapError::Truncated { expected: 1, found: 0 });
    };
    if n < 1 {
        return Err(QapError::Parse {
            position: 0,
            message: format!("instance size must be positive, got {n}"),
        });
    }
    let n = n as usize;
    let nn = n.checked_mul(n).ok_or(QapError::Overflow)?;
    let expected = 1 + 2 * nn;
    if tokens.len() < expected {
        return Err(QapError::Truncated {
            expected,
            found: tokens.len(),
        });
    }
    if tokens.len() > expected {
        return Err(QapError::Parse {
            position: expected,
            message: format!("{} unexpected trailing tokens", tokens.len() - expected),
        });
    }
    QapInstance::new(
        name.to_ascii_lowercase(),
        n,
        tokens[1..1 + nn].to_vec(),
        tokens[1 + nn..].to_vec(),
    )
}

/// Writes an instance in `.dat` layout; `parse_instance` reads it back unchanged.
pub fn serialize_instance(inst: &QapInstance<i64>) -> String {
    let n = inst.n();
    let mut out = format!("{n}\n");
    for matrix in [inst.flow_matrix(), inst.distance_matrix()] {
        out.push('\n');
        for row in matrix.chunks(n) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    out
}

/// Contents of a QAPLIB `.sln` file, permutation converted to 0-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionFile {
    pub n: usize,
    pub objective: Cost,
    pub perm: Assignment,
}

pub fn parse_solution(text: &str) -> Result<SolutionFile> {
    let tokens = parse_tokens(text)?;
    if tokens.len() < 2 {
        return Err(QapError::Parse {
            position: tokens.len(),
            message: "expected header 'n objective'".into(),
        });
    }
    let n = tokens[0];
    if n < 1 {
        return Err(QapError::Parse {
            position: 0,
            message: format!("solution size must be positive, got {n}"),
        });
    }
    let n = n as usize;
    if tokens.len() != 2 + n {
        return Err(QapError::Parse {
            position: tokens.len().min(2 + n),
            message: format!("expected {n} permutation entries, found {}", tokens.len() - 2),
        });
    }
    let perm = tokens[2..]
        .iter()
        .map(|&v| {
            if v < 1 || v as usize > n {
                Err(QapError::NotAPermutation(format!("entry {v} outside 1..={n}")))
            } else {
                Ok(v as usize - 1)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolutionFile {
        n,
        objective: tokens[1],
        perm: Assignment::new(perm)?,
    })
}

/// Which interpretation of a `.sln` permutation reproduced the objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermReading {
    /// `perm[i]` is the location of facility `i`.
    FacilityToLocation,
    /// `perm[j]` is the facility placed at location `j`.
    LocationToFacility,
}

/// Outcome of checking a solution file against its instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionCheck {
    /// Evaluated cost under `reading`.
    pub cost: Cost,
    pub header_objective: Cost,
    pub reading: PermReading,
    /// The assignment (facility -> location) under `reading`.
    pub assignment: Assignment,
}

impl SolutionCheck {
    pub fn matches(&self) -> bool {
        self.cost == self.header_objective
    }
}

/// Evaluates `sol` on `inst`. The direct reading is tried first; if it does not
/// reproduce the header objective the inverse reading is tried. A mismatch
/// under both is reported through [`SolutionCheck::matches`], with the cost of
/// the direct reading.
pub fn validate_solution(inst: &QapInstance<i64>, sol: &SolutionFile) -> Result<SolutionCheck> {
    if sol.n != inst.n() || sol.perm.len() != inst.n() {
        return Err(QapError::DimensionMismatch {
            assignment: sol.n,
            instance: inst.n(),
        });
    }
    let direct = evaluate(inst, &sol.perm)?;
    if direct != sol.objective {
        let inverse = sol.perm.inverse();
        let cost = evaluate(inst, &inverse)?;
        if cost == sol.objective {
            return Ok(SolutionCheck {
                cost,
                header_objective: sol.objective,
                reading: PermReading::LocationToFacility,
                assignment: inverse,
            });
        }
    }
    Ok(SolutionCheck {
        cost: direct,
        header_objective: sol.objective,
        reading: PermReading::FacilityToLocation,
        assignment: sol.perm.clone(),
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| QapError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Instance name derived from a file path: the lowercased file stem.
pub fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().to_ascii_lowercase())
        .unwrap_or_default()
}

pub fn load_instance(path: &Path) -> Result<QapInstance<i64>> {
    parse_instance(&read(path)?, &instance_name(path))
}

pub fn load_solution(path: &Path) -> Result<SolutionFile> {
    parse_solution(&read(path)?)
}

/// Data directory: explicit path, else `$QAP_DATA_DIR`, else `data/qaplib`.
pub fn resolve_data_dir(explicit: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR))
}

pub fn instance_path(data_dir: &Path, name: &str) -> PathBuf {
    data_dir.join(format!("{}.dat", name.to_ascii_lowercase()))
}

pub fn solution_path(data_dir: &Path, name: &str) -> PathBuf {
    data_dir.join(format!("{}.sln", name.to_ascii_lowercase()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_instance() {
        let inst = parse_instance("1\n0\n0\n", "One").unwrap();
        assert_eq!(inst.n(), 1);
        assert_eq!(inst.name(), "one");
        assert_eq!(inst.flow_matrix(), &[0]);
        assert_eq!(inst.distance_matrix(), &[0]);
    }

    #[test]
    fn parse_instance_errors() {
        assert_eq!(
            parse_instance("3\n0 1\n", "t"),
            Err(QapError::Truncated { expected: 19, found: 3 })
        );
        assert!(matches!(
            parse_instance("2\n0 1 1 0\n0 x 1 0", "t"),
            Err(QapError::Parse { position: 6, .. })
        ));
        assert!(matches!(
            parse_instance("1 0 0 7", "t"),
            Err(QapError::Parse { position: 3, .. })
        ));
        assert!(parse_instance("", "t").is_err());
        assert!(parse_instance("0", "t").is_err());
        assert!(matches!(
            parse_instance("1 -1 0", "t"),
            Err(QapError::InvalidEntry { .. })
        ));
    }

    #[test]
    fn parse_is_layout_insensitive() {
        let text = "2\n\n 0 3\n2 0\n\n0 5\n 4 0\n";
        let reflowed = text.split_whitespace().collect::<Vec<_>>().join("\n");
        let a = parse_instance(text, "t").unwrap();
        assert_eq!(a, parse_instance(&reflowed, "t").unwrap());
        assert_eq!(a, parse_instance(&serialize_instance(&a), "t").unwrap());
    }

    #[test]
    fn parse_solution_examples() {
        let s = parse_solution("2 23\n1 2\n").unwrap();
        assert_eq!((s.n, s.objective, s.perm.as_slice()), (2, 23, &[0, 1][..]));
        assert_eq!(parse_solution("2 22\n2 1\n").unwrap().perm.as_slice(), &[1, 0]);
        assert!(matches!(
            parse_solution("3 0\n1 1 2\n"),
            Err(QapError::NotAPermutation(_))
        ));
        assert!(matches!(parse_solution("3 0\n1 2\n"), Err(QapError::Parse { .. })));
        assert!(matches!(parse_solution("2 0\n1 2 3\n"), Err(QapError::Parse { .. })));
        assert!(matches!(parse_solution("2 0\n1 3\n"), Err(QapError::NotAPermutation(_))));
    }

    #[test]
    fn validate_flags_mismatch_and_inverse_reading() {
        let inst = parse_instance("2 0 3 2 0 0 5 4 0", "tiny").unwrap();
        let ok = validate_solution(&inst, &parse_solution("2 22\n2 1").unwrap()).unwrap();
        assert!(ok.matches());
        assert_eq!(ok.cost, 22);

        let bad = validate_solution(&inst, &parse_solution("2 99\n1 2").unwrap()).unwrap();
        assert!(!bad.matches());
        assert_eq!(bad.cost, 23);
        assert_eq!(bad.reading, PermReading::FacilityToLocation);

        assert!(matches!(
            validate_solution(&inst, &parse_solution("3 0\n1 2 3").unwrap()),
            Err(QapError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_reading_is_detected() {
        // 3-cycle so that perm != perm^-1
        let text = "3\n0 1 2\n3 0 4\n5 6 0\n0 7 1\n2 0 9\n4 8 0\n";
        let inst = parse_instance(text, "cyc").unwrap();
        let p = Assignment::new(vec![1, 2, 0]).unwrap();
        let inv_cost = evaluate(&inst, &p.inverse()).unwrap();
        assert_ne!(inv_cost, evaluate(&inst, &p).unwrap());
        let sol = SolutionFile {
            n: 3,
            objective: inv_cost,
            perm: p.clone(),
        };
        let check = validate_solution(&inst, &sol).unwrap();
        assert!(check.matches());
        assert_eq!(check.reading, PermReading::LocationToFacility);
        assert_eq!(check.assignment, p.inverse());
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(best_known("bur26h").unwrap(), 7_098_658);
        assert_eq!(best_known("ste36a").unwrap(), 9_526);
        assert_eq!(best_known("Esc128").unwrap(), 64);
        assert_eq!(best_known("Chr15a").unwrap(), 9_896);
        match best_known("nug30") {
            Err(QapError::UnknownInstance { known, .. }) => assert_eq!(known.len(), 12),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(BestKnownRegistry.names().count(), 12);
        for name in TABLE1_INSTANCES {
            assert!(BestKnownRegistry.contains(name));
        }
    }

    #[test]
    fn name_from_path() {
        assert_eq!(instance_name(Path::new("/x/Esc128.dat")), "esc128");
        assert_eq!(instance_path(Path::new("d"), "Had12"), PathBuf::from("d/had12.dat"));
    }
}
