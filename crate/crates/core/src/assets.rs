//! Checked-in data: the rank-16 complexity representation and the learned
//! automata. Learned automata can be read from a directory named by
//! [`ASSET_DIR_ENV`] instead of the embedded copies.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::automata::{parse_document, AutomatonError, Dfa, Dfao, Document, Machine};
use crate::learner::{
    learn_dfao, validate, AdderOracle, LearnConfig, LearnError, PWordOracle, SequenceOracle, SuccessorOracle,
    ValidationConfig, ValidationReport,
};
use crate::linrep::{LinRep, LinRepError};

pub const ASSET_DIR_ENV: &str = "P4_ASSET_DIR";

pub const COMPLEXITY_LINREP: &str = include_str!("../assets/complexity_rank16.linrep");
pub const COMPLEXITY_LINREP_SHA256: &str = "bf3c7cd7ad6976e94f7ceb6234842702285e4296ef9cd9409feddbf0309225dd";

const P_DFAO: &str = include_str!("../assets/p_dfao.txt");
const SUCCESSOR: &str = include_str!("../assets/successor.txt");
const ADDER: &str = include_str!("../assets/adder.txt");

#[derive(Debug, Error)]
pub enum AssetError {
    #[error("asset {0} not found")]
    Missing(PathBuf),
    #[error("asset {name}: {source}")]
    Automaton { name: String, source: AutomatonError },
    #[error("asset {name}: {source}")]
    LinRep { name: String, source: LinRepError },
    #[error("asset {name} has the wrong kind of automaton")]
    Kind { name: String },
    #[error("asset {name} checksum {found} differs from {expected}")]
    Checksum { name: String, found: String, expected: String },
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("asset {name} failed validation with {mismatches} mismatches")]
    Validation { name: String, mismatches: u64 },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Parses a rank-16 representation text after checking its checksum.
pub fn complexity_linrep_from(text: &str) -> Result<LinRep, AssetError> {
    let name = "complexity_rank16.linrep".to_string();
    let found = sha256_hex(text);
    if found != COMPLEXITY_LINREP_SHA256 {
        return Err(AssetError::Checksum {
            name,
            found,
            expected: COMPLEXITY_LINREP_SHA256.into(),
        });
    }
    LinRep::parse(text).map_err(|source| AssetError::LinRep { name, source })
}

pub fn complexity_linrep() -> Result<LinRep, AssetError> {
    complexity_linrep_from(COMPLEXITY_LINREP)
}

/// The learned automata shipped with the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LearnedAsset {
    PWord,
    Successor,
    Adder,
}

impl LearnedAsset {
    pub const ALL: [LearnedAsset; 3] = [LearnedAsset::PWord, LearnedAsset::Successor, LearnedAsset::Adder];

    pub fn file_name(self) -> &'static str {
        match self {
            LearnedAsset::PWord => "p_dfao.txt",
            LearnedAsset::Successor => "successor.txt",
            LearnedAsset::Adder => "adder.txt",
        }
    }

    pub fn oracle(self) -> Box<dyn SequenceOracle> {
        match self {
            LearnedAsset::PWord => Box::new(PWordOracle::new()),
            LearnedAsset::Successor => Box::new(SuccessorOracle::new()),
            LearnedAsset::Adder => Box::new(AdderOracle::new()),
        }
    }

    pub fn learn_config(self) -> LearnConfig {
        LearnConfig {
            suffix_depth: self.oracle().suffix_depth(),
            ..LearnConfig::default()
        }
    }

    /// Bounds every shipped copy is validated to.
    pub fn validation(self) -> ValidationConfig {
        match self {
            LearnedAsset::PWord => ValidationConfig {
                exhaustive_length: 12,
                value_bound: 100_000,
                random_trials: 1000,
                seed: 1,
            },
            LearnedAsset::Successor => ValidationConfig {
                exhaustive_length: 9,
                value_bound: 100_000,
                random_trials: 1000,
                seed: 1,
            },
            LearnedAsset::Adder => ValidationConfig {
                exhaustive_length: 5,
                value_bound: 2000,
                random_trials: 1000,
                seed: 1,
            },
        }
    }

    fn embedded(self) -> &'static str {
        match self {
            LearnedAsset::PWord => P_DFAO,
            LearnedAsset::Successor => SUCCESSOR,
            LearnedAsset::Adder => ADDER,
        }
    }

    /// The asset whose oracle has this name.
    pub fn by_oracle_name(name: &str) -> Option<LearnedAsset> {
        Self::ALL.into_iter().find(|a| a.oracle().name() == name)
    }
}

/// Where learned automata are read from and written to.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssetStore {
    dir: Option<PathBuf>,
}

impl AssetStore {
    pub fn embedded() -> Self {
        AssetStore { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        AssetStore { dir: Some(dir.into()) }
    }

    /// The directory named by [`ASSET_DIR_ENV`], or the embedded copies.
    pub fn from_env() -> Self {
        match std::env::var_os(ASSET_DIR_ENV) {
            Some(dir) if !dir.is_empty() => Self::at(dir),
            _ => Self::embedded(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn text(&self, asset: LearnedAsset) -> Result<String, AssetError> {
        match &self.dir {
            None => Ok(asset.embedded().to_string()),
            Some(dir) => {
                let path = dir.join(asset.file_name());
                if !path.exists() {
                    return Err(AssetError::Missing(path));
                }
                Ok(std::fs::read_to_string(path)?)
            }
        }
    }

    pub fn document(&self, asset: LearnedAsset) -> Result<Document, AssetError> {
        parse_document(&self.text(asset)?).map_err(|source| AssetError::Automaton {
            name: asset.file_name().into(),
            source,
        })
    }

    pub fn dfao(&self, asset: LearnedAsset) -> Result<Dfao, AssetError> {
        match self.document(asset)?.machine {
            Machine::Dfao(d) => Ok(d),
            Machine::Dfa(_) => Err(AssetError::Kind {
                name: asset.file_name().into(),
            }),
        }
    }

    pub fn write(&self, asset: LearnedAsset, document: &Document) -> Result<PathBuf, AssetError> {
        let dir = self.dir.clone().unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&dir)?;
        let path = dir.join(asset.file_name());
        std::fs::write(&path, document.render())?;
        Ok(path)
    }
}

/// The acceptor for a learned relation (output 1 means accept).
pub fn relation_dfa(dfao: &Dfao) -> Dfa {
    dfao.to_dfa(1).minimize()
}

/// Learns an asset, validates it to its configured bounds and returns the
/// document with provenance headers. Fails if validation finds a mismatch.
pub fn learn_asset(asset: LearnedAsset, config: LearnConfig) -> Result<(Document, ValidationReport), AssetError> {
    let oracle = asset.oracle();
    let dfao = learn_dfao(oracle.as_ref(), config)?;
    let bounds = asset.validation();
    let report = validate(&dfao, oracle.as_ref(), bounds);
    if !report.passed() {
        return Err(AssetError::Validation {
            name: asset.file_name().into(),
            mismatches: report.mismatch_count,
        });
    }
    let doc = Document::new(Machine::Dfao(dfao))
        .with_comment(format!("oracle: {}", oracle.name()))
        .with_comment(format!("suffix-depth: {}", config.suffix_depth))
        .with_comment(format!("prefix-bound: {}", config.prefix_bound))
        .with_comment(format!(
            "validated: every input of length <= {}, values below {}, {} random inputs (seed {})",
            bounds.exhaustive_length, bounds.value_bound, bounds.random_trials, bounds.seed
        ))
        .with_comment("status: learned guess validated to the bounds above, not proved");
    Ok((doc, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::{carry_adder, carry_successor};
    use crate::numeration::P4Rep;
    use crate::word::fixed_point_prefix;

    #[test]
    fn linrep_checksum_guards_transcription() {
        assert_eq!(sha256_hex(COMPLEXITY_LINREP), COMPLEXITY_LINREP_SHA256);
        let lr = complexity_linrep().unwrap();
        assert_eq!(lr.rank(), 16);
        let tampered = COMPLEXITY_LINREP.replacen("87", "88", 1);
        assert!(matches!(complexity_linrep_from(&tampered), Err(AssetError::Checksum { .. })));
    }

    #[test]
    fn embedded_assets_parse_with_headers() {
        let store = AssetStore::embedded();
        for asset in LearnedAsset::ALL {
            let doc = store.document(asset).unwrap();
            assert_eq!(doc.header("oracle"), Some(asset.oracle().name()));
            assert!(doc.header("status").unwrap().contains("not proved"));
            assert!(matches!(doc.machine, Machine::Dfao(_)));
        }
    }

    #[test]
    fn p_asset_matches_buffer() {
        let d = AssetStore::embedded().dfao(LearnedAsset::PWord).unwrap();
        let p = fixed_point_prefix(10_000);
        for (n, &a) in p.iter().enumerate() {
            let w: Vec<usize> = P4Rep::encode_u64(n as u64).digits().iter().map(|&b| b as usize).collect();
            assert_eq!(d.run_indices(&w), a);
        }
    }

    #[test]
    fn relation_assets_equal_carry_constructions() {
        let store = AssetStore::embedded();
        let adder = relation_dfa(&store.dfao(LearnedAsset::Adder).unwrap());
        assert_eq!(adder.trimmed_state_count(), 64);
        assert!(adder.equivalent(&carry_adder()).unwrap().holds());
        let succ = relation_dfa(&store.dfao(LearnedAsset::Successor).unwrap());
        assert!(succ.equivalent(&carry_successor()).unwrap().holds());
    }

    #[test]
    fn missing_directory_is_reported() {
        let store = AssetStore::at("/nonexistent/p4-assets");
        assert!(matches!(store.document(LearnedAsset::PWord), Err(AssetError::Missing(_))));
    }

    #[test]
    fn relearning_small_assets_reproduces_them() {
        let store = AssetStore::embedded();
        for asset in [LearnedAsset::PWord, LearnedAsset::Successor] {
            let (doc, report) = learn_asset(asset, asset.learn_config()).unwrap();
            assert!(report.passed());
            assert_eq!(doc.render(), store.text(asset).unwrap());
        }
    }
}
