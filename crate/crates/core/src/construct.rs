//! Frozen-set construction, parity-check allocation and input-vector
//! assembly from the universal reliability sequence.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{CodeConfig, RmMode};
use crate::data::parse_index_list;
use crate::error::{Error, Result};
use crate::interleave::Permutation;

pub const Q_SEQ_LEN: usize = 1024;

/// The 1024 bit-channel indices, least reliable first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilitySequence {
    q: Vec<usize>,
}

impl ReliabilitySequence {
    pub fn from_indices(q: Vec<usize>) -> Result<Self> {
        if q.len() != Q_SEQ_LEN {
            return Err(Error::WrongLength {
                expected: Q_SEQ_LEN,
                actual: q.len(),
            });
        }
        Permutation::new(q.clone())?;
        Ok(Self { q })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_indices(parse_index_list(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.q
    }

    /// The entries below `n`, in order.
    pub fn extract(&self, n: usize) -> Result<Vec<usize>> {
        if !(32..=Q_SEQ_LEN).contains(&n) || !n.is_power_of_two() {
            return Err(Error::BadN(n));
        }
        Ok(self.q.iter().copied().filter(|&i| i < n).collect())
    }
}

/// Role of one input-vector position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitKind {
    Frozen,
    Message,
    Parity,
}

/// Partition of `0..N` into frozen, message and parity-check positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubchannelAllocation {
    pub n: usize,
    /// Ascending.
    pub frozen: Vec<usize>,
    /// Ascending; message and parity-check positions.
    pub info: Vec<usize>,
    /// Ascending.
    pub pc: Vec<usize>,
    /// The row-weight-selected subset of `pc`.
    pub pc_wm: Vec<usize>,
    /// `info \ pc`, ascending.
    pub msg_positions: Vec<usize>,
    #[serde(skip)]
    kinds: Vec<BitKind>,
}

impl SubchannelAllocation {
    /// Allocation from explicit frozen and parity-check sets.
    pub fn new(n: usize, frozen: &[usize], pc: &[usize], pc_wm: &[usize]) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let mut kinds = vec![BitKind::Message; n];
        for &i in frozen {
            if i >= n || kinds[i] != BitKind::Message {
                return Err(Error::AllocationIncomplete(format!(
                    "frozen index {i} repeated or out of range"
                )));
            }
            kinds[i] = BitKind::Frozen;
        }
        for &i in pc {
            if i >= n || kinds[i] != BitKind::Message {
                return Err(Error::AllocationIncomplete(format!(
                    "parity index {i} frozen, repeated or out of range"
                )));
            }
            kinds[i] = BitKind::Parity;
        }
        if let Some(&i) = pc_wm
            .iter()
            .find(|&&i| i >= n || kinds[i] != BitKind::Parity)
        {
            return Err(Error::AllocationIncomplete(format!(
                "weight-selected index {i} is not a parity position"
            )));
        }
        let select = |pred: fn(BitKind) -> bool| -> Vec<usize> {
            (0..n).filter(|&i| pred(kinds[i])).collect()
        };
        let mut pc_wm = pc_wm.to_vec();
        pc_wm.sort_unstable();
        Ok(Self {
            n,
            frozen: select(|k| k == BitKind::Frozen),
            info: select(|k| k != BitKind::Frozen),
            pc: select(|k| k == BitKind::Parity),
            pc_wm,
            msg_positions: select(|k| k == BitKind::Message),
            kinds,
        })
    }

    /// Allocation without parity-check bits.
    pub fn from_frozen(n: usize, frozen: &[usize]) -> Result<Self> {
        Self::new(n, frozen, &[], &[])
    }

    pub fn kind(&self, i: usize) -> BitKind {
        self.kinds[i]
    }

    pub fn kinds(&self) -> &[BitKind] {
        &self.kinds
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.kinds[i] == BitKind::Frozen
    }

    /// Frozen indicator per position.
    pub fn frozen_mask(&self) -> Vec<bool> {
        self.kinds.iter().map(|&k| k == BitKind::Frozen).collect()
    }

    /// Number of message bits `K`.
    pub fn k(&self) -> usize {
        self.msg_positions.len()
    }

    /// Number of non-frozen bits `K'`.
    pub fn k_prime(&self) -> usize {
        self.info.len()
    }
}

/// Last index `T` of the extra-frozen prefix `{0..T}` used with puncturing.
pub fn puncture_extra_freeze_bound(n: usize, e: usize) -> usize {
    // ⌈x/4⌉ and ⌈x/16⌉ on integers, minus one.
    if 4 * e >= 3 * n {
        (3 * n - 2 * e).div_ceil(4).saturating_sub(1)
    } else {
        (9 * n - 4 * e).div_ceil(16).saturating_sub(1)
    }
}

/// Weight of row `i` of `G_N`.
pub fn row_weight(i: usize) -> usize {
    1 << i.count_ones()
}

/// Derive the allocation for `cfg` from the reliability sequence and the
/// sub-block interleaver `j` of length `N`.
pub fn build_allocation(
    cfg: &CodeConfig,
    seq: &ReliabilitySequence,
    j: &Permutation,
) -> Result<SubchannelAllocation> {
    let n = cfg.n;
    if j.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: j.len(),
        });
    }
    let order = seq.extract(n)?;
    let budget = n - cfg.k_prime;
    let mut frozen = vec![false; n];

    let j = j.as_slice();
    match cfg.rm_mode {
        RmMode::Puncture => {
            for &i in &j[..cfg.rm_count] {
                frozen[i] = true;
            }
            if cfg.rm_count > 0 {
                let t = puncture_extra_freeze_bound(n, cfg.e);
                for f in frozen.iter_mut().take(t + 1) {
                    *f = true;
                }
            }
        }
        RmMode::Shorten => {
            for &i in &j[cfg.e..] {
                frozen[i] = true;
            }
        }
        RmMode::Repeat => {}
    }
    let pre_frozen = frozen.iter().filter(|&&f| f).count();
    if pre_frozen > budget {
        return Err(Error::Infeasible { pre_frozen, budget });
    }
    let mut remaining = budget - pre_frozen;
    for &i in &order {
        if remaining == 0 {
            break;
        }
        if !frozen[i] {
            frozen[i] = true;
            remaining -= 1;
        }
    }

    // Info positions, least reliable first.
    let info_by_rel: Vec<usize> = order.iter().copied().filter(|&i| !frozen[i]).collect();
    debug_assert_eq!(info_by_rel.len(), cfg.k_prime);
    let n_lr = cfg.n_pc - cfg.n_pc_wm;
    let mut pc: Vec<usize> = info_by_rel[..n_lr].to_vec();
    let mut pc_wm = Vec::new();
    if cfg.n_pc_wm > 0 {
        // The K most reliable info positions, scanned most reliable first so
        // that ties keep the most reliable index.
        let pool = &info_by_rel[cfg.k_prime - cfg.k..];
        let mut best: Option<usize> = None;
        for &i in pool.iter().rev() {
            if best.is_none_or(|b| row_weight(i) < row_weight(b)) {
                best = Some(i);
            }
        }
        let chosen = best.expect("K >= 1");
        pc.push(chosen);
        pc_wm.push(chosen);
    }
    let frozen_idx: Vec<usize> = (0..n).filter(|&i| frozen[i]).collect();
    SubchannelAllocation::new(n, &frozen_idx, &pc, &pc_wm)
}

/// Five-cell cyclic register shared by the encoder and the decoders.
/// Cell `y_0` is bit 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PcRegister(u8);

impl PcRegister {
    #[inline]
    pub fn rotate(&mut self) {
        self.0 = (self.0 >> 1) | ((self.0 & 1) << 4);
    }

    #[inline]
    pub fn head(self) -> u8 {
        self.0 & 1
    }

    #[inline]
    pub fn absorb(&mut self, bit: u8) {
        self.0 ^= bit & 1;
    }
}

/// Fill the parity-check positions of `u` (message bits already placed,
/// frozen positions zero) by running the cyclic register over `0..N`.
pub fn compute_pc_bits(u: &mut [u8], alloc: &SubchannelAllocation) -> Result<()> {
    if u.len() != alloc.n {
        return Err(Error::LengthMismatch {
            expected: alloc.n,
            actual: u.len(),
        });
    }
    let mut reg = PcRegister::default();
    for (i, ui) in u.iter_mut().enumerate() {
        reg.rotate();
        match alloc.kind(i) {
            BitKind::Frozen => {
                if *ui != 0 {
                    return Err(Error::AllocationIncomplete(format!(
                        "frozen position {i} holds a one"
                    )));
                }
            }
            BitKind::Parity => *ui = reg.head(),
            BitKind::Message => reg.absorb(*ui),
        }
    }
    Ok(())
}

/// Build `u` from the (interleaved) CRC-protected message `c'`.
pub fn assemble_u(alloc: &SubchannelAllocation, c_prime: &[u8]) -> Result<Vec<u8>> {
    if c_prime.len() != alloc.k() {
        return Err(Error::LengthMismatch {
            expected: alloc.k(),
            actual: c_prime.len(),
        });
    }
    let mut u = vec![0u8; alloc.n];
    for (&pos, &b) in alloc.msg_positions.iter().zip(c_prime) {
        u[pos] = b & 1;
    }
    compute_pc_bits(&mut u, alloc)?;
    Ok(u)
}

/// The message bits of `u`, in `msg_positions` order.
pub fn extract_message(alloc: &SubchannelAllocation, u: &[u8]) -> Vec<u8> {
    alloc.msg_positions.iter().map(|&i| u[i]).collect()
}
