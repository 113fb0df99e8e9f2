//! Standardized constant tables: the 1024-entry reliability sequence, the
//! 164-entry input-interleaver pattern and the 32-entry sub-block pattern.
//!
//! The tables ship as plain-text files (one integer per line) under
//! `crates/core/data/` and are embedded at build time. Setting
//! `NRPOLAR_DATA_DIR` makes [`Tables::global`] read `q_seq_1024.txt`,
//! `pi_il_max.txt` and `sub_block_p.txt` from that directory instead.

use std::path::Path;
use std::sync::OnceLock;

use crate::construct::ReliabilitySequence;
use crate::error::{Error, Result};
use crate::interleave::{Permutation, SubBlockPattern, K_IL_MAX};

pub const DATA_DIR_ENV: &str = "NRPOLAR_DATA_DIR";

pub const Q_SEQ_FILE: &str = "q_seq_1024.txt";
pub const PI_IL_MAX_FILE: &str = "pi_il_max.txt";
pub const SUB_BLOCK_P_FILE: &str = "sub_block_p.txt";

pub const EMBEDDED_Q_SEQ: &str = include_str!("../data/q_seq_1024.txt");
pub const EMBEDDED_PI_IL_MAX: &str = include_str!("../data/pi_il_max.txt");
pub const EMBEDDED_SUB_BLOCK_P: &str = include_str!("../data/sub_block_p.txt");

/// Parse one non-negative integer per non-empty line.
pub fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            l.parse::<usize>()
                .map_err(|e| Error::Data(format!("line {}: {l:?}: {e}", i + 1)))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Tables {
    pub reliability: ReliabilitySequence,
    pub pi_il_max: Vec<usize>,
    pub sub_block: SubBlockPattern,
}

impl Tables {
    fn from_texts(q: &str, pi: &str, p: &str) -> Result<Self> {
        let reliability = ReliabilitySequence::parse(q)?;
        let pi_il_max = parse_index_list(pi)?;
        if pi_il_max.len() != K_IL_MAX {
            return Err(Error::WrongLength {
                expected: K_IL_MAX,
                actual: pi_il_max.len(),
            });
        }
        Permutation::new(pi_il_max.clone())?;
        let sub_block = SubBlockPattern::new(&parse_index_list(p)?)?;
        Ok(Self {
            reliability,
            pi_il_max,
            sub_block,
        })
    }

    pub fn embedded() -> Result<Self> {
        Self::from_texts(EMBEDDED_Q_SEQ, EMBEDDED_PI_IL_MAX, EMBEDDED_SUB_BLOCK_P)
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        let read = |name: &str| {
            std::fs::read_to_string(dir.join(name))
                .map_err(|e| Error::Data(format!("{}: {e}", dir.join(name).display())))
        };
        Self::from_texts(
            &read(Q_SEQ_FILE)?,
            &read(PI_IL_MAX_FILE)?,
            &read(SUB_BLOCK_P_FILE)?,
        )
    }

    /// Process-wide tables, loaded once (from `NRPOLAR_DATA_DIR` if set).
    pub fn global() -> Result<&'static Tables> {
        static TABLES: OnceLock<Result<Tables>> = OnceLock::new();
        TABLES
            .get_or_init(|| match std::env::var_os(DATA_DIR_ENV) {
                Some(dir) => Tables::from_dir(Path::new(&dir)),
                None => Tables::embedded(),
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}
