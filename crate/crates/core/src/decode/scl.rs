//! Successive cancellation list decoding with lazily copied layer buffers.
//!
//! Layer `s` of a path holds `2^s` LLRs (and `2^s` partial sums of the
//! last completed left subtree at that layer). A layer is always rewritten
//! in full before it is read again, so paths share buffers after a fork and
//! a private buffer is taken only on the next write, without copying.

use crate::construct::{BitKind, PcRegister, SubchannelAllocation};
use crate::crc::CrcParity;
use crate::error::{Error, Result};
use crate::soft::hard_decision;

use super::sc::{f_min_sum, g_update};
use super::{AssistMode, CrcContext, DecodeResult, DecoderPolicy};

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Leaf {
    Frozen,
    /// Message or CRC bit; `column` is its CRC parity column (0 if unused).
    Info {
        column: u32,
    },
    Parity,
    /// CRC remainder bit `r`, checkable from the bits decoded before it.
    Crc {
        r: usize,
    },
}

#[derive(Debug, Clone)]
struct Pool<T> {
    size: usize,
    data: Vec<T>,
    refs: Vec<u32>,
    free: Vec<usize>,
}

impl<T: Copy + Default> Pool<T> {
    fn new(size: usize, slots: usize) -> Self {
        Self {
            size,
            data: vec![T::default(); size * slots],
            refs: vec![0; slots],
            free: (0..slots).rev().collect(),
        }
    }

    fn reset(&mut self) {
        self.refs.fill(0);
        self.free.clear();
        self.free.extend((0..self.refs.len()).rev());
    }

    fn retain(&mut self, slot: usize) {
        if slot != UNSET {
            self.refs[slot] += 1;
        }
    }

    fn release(&mut self, slot: usize) {
        if slot != UNSET {
            self.refs[slot] -= 1;
            if self.refs[slot] == 0 {
                self.free.push(slot);
            }
        }
    }

    /// A slot owned only by the caller, replacing `slot`. Contents are
    /// unspecified.
    fn exclusive(&mut self, slot: usize) -> usize {
        if slot != UNSET && self.refs[slot] == 1 {
            return slot;
        }
        self.release(slot);
        let s = self.free.pop().expect("pool sized for the list");
        self.refs[s] = 1;
        s
    }

    fn get(&self, slot: usize) -> &[T] {
        &self.data[slot * self.size..(slot + 1) * self.size]
    }

    fn get_mut(&mut self, slot: usize) -> &mut [T] {
        &mut self.data[slot * self.size..(slot + 1) * self.size]
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    ord: usize,
    bit: u8,
    metric: f64,
    fails: bool,
}

#[inline]
fn penalty(llr: f64, bit: u8) -> f64 {
    if bit != hard_decision(llr) {
        llr.abs()
    } else {
        0.0
    }
}

/// Reusable SCL decoder for one code.
#[derive(Debug, Clone)]
pub struct ListDecoder {
    n_log2: usize,
    n: usize,
    list: usize,
    policy: DecoderPolicy,
    alloc: SubchannelAllocation,
    crc: Option<CrcContext>,
    parity: Option<CrcParity>,
    leaves: Vec<Leaf>,

    channel: Vec<f64>,
    alpha: Vec<Pool<f64>>,
    beta: Vec<Pool<u8>>,
    // Per path id, flattened.
    alpha_slot: Vec<usize>,
    beta_slot: Vec<usize>,
    metric: Vec<f64>,
    reg: Vec<PcRegister>,
    acc: Vec<u32>,
    failed: Vec<bool>,
    u: Vec<u8>,

    active: Vec<usize>,
    free_paths: Vec<usize>,
    cands: Vec<Candidate>,
    scratch: (Vec<u8>, Vec<u8>),
    trace: Option<Vec<usize>>,
}

impl ListDecoder {
    pub fn new(
        alloc: &SubchannelAllocation,
        crc: Option<&CrcContext>,
        policy: DecoderPolicy,
    ) -> Result<Self> {
        policy.validate()?;
        let n = alloc.n;
        if n < 2 {
            return Err(Error::BadN(n));
        }
        let n_log2 = n.trailing_zeros() as usize;
        let list = policy.list_size;

        let mut leaves: Vec<Leaf> = alloc
            .kinds()
            .iter()
            .map(|k| match k {
                BitKind::Frozen => Leaf::Frozen,
                BitKind::Message => Leaf::Info { column: 0 },
                BitKind::Parity => Leaf::Parity,
            })
            .collect();

        let mut parity = None;
        if let Some(ctx) = crc {
            let k = ctx.msg_len + ctx.poly.degree();
            if alloc.k() != k {
                return Err(Error::LengthMismatch {
                    expected: k,
                    actual: alloc.k(),
                });
            }
            if let Some(perm) = &ctx.interleaver {
                if perm.len() != k {
                    return Err(Error::LengthMismatch {
                        expected: k,
                        actual: perm.len(),
                    });
                }
                let p = CrcParity::new(ctx.msg_len, ctx.poly, ctx.init, ctx.rnti);
                let deps: Vec<Vec<usize>> =
                    (0..ctx.poly.degree()).map(|r| p.dependencies(r)).collect();
                let mut seen = vec![false; ctx.msg_len];
                for (k, &pos) in alloc.msg_positions.iter().enumerate() {
                    let j = perm.as_slice()[k];
                    leaves[pos] = if j < ctx.msg_len {
                        seen[j] = true;
                        Leaf::Info {
                            column: p.columns[j],
                        }
                    } else {
                        let r = j - ctx.msg_len;
                        if deps[r].iter().all(|&d| seen[d]) {
                            Leaf::Crc { r }
                        } else {
                            Leaf::Info { column: 0 }
                        }
                    };
                }
                parity = Some(p);
            }
        }

        Ok(Self {
            n_log2,
            n,
            list,
            policy,
            alloc: alloc.clone(),
            crc: crc.cloned(),
            parity,
            leaves,
            channel: vec![0.0; n],
            alpha: (0..n_log2).map(|s| Pool::new(1 << s, list)).collect(),
            beta: (0..n_log2).map(|s| Pool::new(1 << s, list)).collect(),
            alpha_slot: vec![UNSET; list * n_log2],
            beta_slot: vec![UNSET; list * n_log2],
            metric: vec![0.0; list],
            reg: vec![PcRegister::default(); list],
            acc: vec![0; list],
            failed: vec![false; list],
            u: vec![0; list * n],
            active: Vec::with_capacity(list),
            free_paths: Vec::with_capacity(list),
            cands: Vec::with_capacity(2 * list),
            scratch: (vec![0; n], vec![0; n]),
            trace: None,
        })
    }

    pub fn policy(&self) -> &DecoderPolicy {
        &self.policy
    }

    pub fn allocation(&self) -> &SubchannelAllocation {
        &self.alloc
    }

    /// Number of CRC bits verified during decoding rather than at the end.
    pub fn distributed_checks(&self) -> usize {
        self.leaves
            .iter()
            .filter(|l| matches!(l, Leaf::Crc { .. }))
            .count()
    }

    /// Record the number of live paths after every leaf on subsequent
    /// decodes; read back with [`ListDecoder::path_counts`].
    pub fn enable_trace(&mut self, on: bool) {
        self.trace = on.then(Vec::new);
    }

    pub fn path_counts(&self) -> Option<&[usize]> {
        self.trace.as_deref()
    }

    fn reset(&mut self, llr: &[f64]) {
        self.channel.copy_from_slice(llr);
        for p in self.alpha.iter_mut() {
            p.reset();
        }
        for p in self.beta.iter_mut() {
            p.reset();
        }
        self.alpha_slot.fill(UNSET);
        self.beta_slot.fill(UNSET);
        self.metric[0] = 0.0;
        self.reg[0] = PcRegister::default();
        self.acc[0] = 0;
        self.failed[0] = false;
        self.active.clear();
        self.active.push(0);
        self.free_paths.clear();
        self.free_paths.extend((1..self.list).rev());
        if let Some(t) = self.trace.as_mut() {
            t.clear();
        }
    }

    /// Layer `s` of path `p` from layer `s + 1`; `g` step if `right`.
    fn step(&mut self, p: usize, s: usize, right: bool) {
        let n_log2 = self.n_log2;
        let out_slot = self.alpha[s].exclusive(self.alpha_slot[p * n_log2 + s]);
        self.alpha_slot[p * n_log2 + s] = out_slot;
        let h = 1usize << s;
        let (lo, hi) = self.alpha.split_at_mut(s + 1);
        let input: &[f64] = if s + 1 == n_log2 {
            &self.channel
        } else {
            hi[0].get(self.alpha_slot[p * n_log2 + s + 1])
        };
        let out = lo[s].get_mut(out_slot);
        let (a1, a2) = input.split_at(h);
        if right {
            let beta = self.beta[s].get(self.beta_slot[p * n_log2 + s]);
            for j in 0..h {
                out[j] = g_update(a1[j], a2[j], beta[j]);
            }
        } else {
            for j in 0..h {
                out[j] = f_min_sum(a1[j], a2[j]);
            }
        }
    }

    fn leaf_llr(&mut self, p: usize, i: usize) -> f64 {
        let top = if i == 0 {
            self.n_log2 - 1
        } else {
            let t = i.trailing_zeros() as usize;
            self.step(p, t, true);
            t
        };
        let start = if i == 0 { top + 1 } else { top };
        for s in (0..start).rev() {
            self.step(p, s, false);
        }
        self.alpha[0].get(self.alpha_slot[p * self.n_log2])[0]
    }

    fn propagate_beta(&mut self, p: usize, i: usize, bit: u8) {
        let n_log2 = self.n_log2;
        let (mut cur, mut next) = std::mem::take(&mut self.scratch);
        cur[0] = bit;
        let mut s = 0;
        while s < n_log2 && (i >> s) & 1 == 1 {
            let h = 1usize << s;
            let left = self.beta[s].get(self.beta_slot[p * n_log2 + s]);
            for j in 0..h {
                next[j] = left[j] ^ cur[j];
                next[h + j] = cur[j];
            }
            std::mem::swap(&mut cur, &mut next);
            s += 1;
        }
        if s < n_log2 {
            let slot = self.beta[s].exclusive(self.beta_slot[p * n_log2 + s]);
            self.beta_slot[p * n_log2 + s] = slot;
            self.beta[s].get_mut(slot).copy_from_slice(&cur[..1 << s]);
        }
        self.scratch = (cur, next);
    }

    fn expected(&self, p: usize, leaf: Leaf) -> Option<u8> {
        match leaf {
            Leaf::Parity => Some(self.reg[p].head()),
            Leaf::Crc { r } => Some(
                self.parity
                    .as_ref()
                    .expect("parity map exists with CRC leaves")
                    .bit(self.acc[p], r),
            ),
            _ => None,
        }
    }

    fn commit(&mut self, p: usize, i: usize, leaf: Leaf, bit: u8) {
        match leaf {
            Leaf::Info { column } => {
                self.reg[p].absorb(bit);
                if bit == 1 {
                    self.acc[p] ^= column;
                }
            }
            Leaf::Crc { .. } => self.reg[p].absorb(bit),
            Leaf::Frozen | Leaf::Parity => {}
        }
        self.u[p * self.n + i] = bit;
        self.propagate_beta(p, i, bit);
    }

    fn clone_path(&mut self, from: usize) -> usize {
        let to = self.free_paths.pop().expect("list has room");
        let n_log2 = self.n_log2;
        for s in 0..n_log2 {
            let a = self.alpha_slot[from * n_log2 + s];
            self.alpha[s].retain(a);
            self.alpha_slot[to * n_log2 + s] = a;
            let b = self.beta_slot[from * n_log2 + s];
            self.beta[s].retain(b);
            self.beta_slot[to * n_log2 + s] = b;
        }
        self.metric[to] = self.metric[from];
        self.reg[to] = self.reg[from];
        self.acc[to] = self.acc[from];
        self.failed[to] = self.failed[from];
        self.u
            .copy_within(from * self.n..(from + 1) * self.n, to * self.n);
        to
    }

    fn kill_path(&mut self, p: usize) {
        let n_log2 = self.n_log2;
        for s in 0..n_log2 {
            self.alpha[s].release(std::mem::replace(
                &mut self.alpha_slot[p * n_log2 + s],
                UNSET,
            ));
            self.beta[s].release(std::mem::replace(
                &mut self.beta_slot[p * n_log2 + s],
                UNSET,
            ));
        }
        self.free_paths.push(p);
    }

    /// Decode codeword-domain LLRs of length `N`.
    pub fn decode(&mut self, llr: &[f64]) -> Result<DecodeResult> {
        if llr.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: llr.len(),
            });
        }
        self.reset(llr);
        let mut explored = 0usize;
        let mut lambdas = vec![0.0f64; self.list];

        for i in 0..self.n {
            let leaf = self.leaves[i];
            for idx in 0..self.active.len() {
                let p = self.active[idx];
                lambdas[p] = self.leaf_llr(p, i);
                self.reg[p].rotate();
            }
            let mode = match leaf {
                Leaf::Frozen => None,
                Leaf::Info { .. } => Some(AssistMode::KeepFailedPaths),
                Leaf::Parity => Some(self.policy.pc_mode),
                Leaf::Crc { .. } => Some(self.policy.dcrc_mode),
            };
            let checked = matches!(leaf, Leaf::Parity | Leaf::Crc { .. });

            match mode {
                None | Some(AssistMode::DynamicFrozen) => {
                    explored += self.active.len();
                    for idx in 0..self.active.len() {
                        let p = self.active[idx];
                        let bit = self.expected(p, leaf).unwrap_or(0);
                        self.metric[p] += penalty(lambdas[p], bit);
                        self.commit(p, i, leaf, bit);
                    }
                }
                Some(mode) => {
                    self.cands.clear();
                    for (ord, &p) in self.active.iter().enumerate() {
                        let exp = if checked {
                            self.expected(p, leaf)
                        } else {
                            None
                        };
                        for bit in 0..2u8 {
                            self.cands.push(Candidate {
                                ord,
                                bit,
                                metric: self.metric[p] + penalty(lambdas[p], bit),
                                fails: exp.is_some_and(|e| e != bit),
                            });
                        }
                    }
                    explored += self.cands.len();
                    if mode == AssistMode::KillFailedPaths && self.cands.iter().any(|c| !c.fails) {
                        self.cands.retain(|c| !c.fails);
                    }
                    // Stable: equal metrics keep (path, bit) order.
                    self.cands.sort_by(|a, b| a.metric.total_cmp(&b.metric));
                    self.cands.truncate(self.list);

                    let old = std::mem::take(&mut self.active);
                    let mut take = vec![[None::<Candidate>; 2]; old.len()];
                    for c in &self.cands {
                        take[c.ord][c.bit as usize] = Some(*c);
                    }
                    for (ord, &p) in old.iter().enumerate() {
                        if take[ord].iter().all(Option::is_none) {
                            self.kill_path(p);
                        }
                    }
                    let mut next = Vec::with_capacity(self.list);
                    for (ord, &p) in old.iter().enumerate() {
                        match take[ord] {
                            [Some(c0), Some(c1)] => {
                                let q = self.clone_path(p);
                                next.push((p, c0));
                                next.push((q, c1));
                            }
                            [Some(c), None] | [None, Some(c)] => next.push((p, c)),
                            [None, None] => {}
                        }
                    }
                    for &(p, c) in &next {
                        self.metric[p] = c.metric;
                        self.failed[p] |= c.fails;
                        self.commit(p, i, leaf, c.bit);
                    }
                    self.active = next.into_iter().map(|(p, _)| p).collect();
                }
            }

            if let Some(t) = self.trace.as_mut() {
                t.push(self.active.len());
            }
            if self.policy.early_termination
                && checked
                && mode != Some(AssistMode::DynamicFrozen)
                && self.active.iter().all(|&p| self.failed[p])
            {
                let best = self.best_by_metric(|_| true).expect("list never empty");
                return Ok(self.result(best, Some(i), explored));
            }
        }

        let best = self
            .best_by_metric(|p| !self.failed[p] && self.crc_pass(p))
            .or_else(|| self.best_by_metric(|_| true))
            .expect("list never empty");
        Ok(self.result(best, None, explored))
    }

    fn c_of(&self, p: usize) -> Vec<u8> {
        let row = &self.u[p * self.n..(p + 1) * self.n];
        let c_prime: Vec<u8> = self.alloc.msg_positions.iter().map(|&i| row[i]).collect();
        match &self.crc {
            Some(ctx) => ctx.deinterleave(&c_prime),
            None => c_prime,
        }
    }

    fn best_by_metric(&self, accept: impl Fn(usize) -> bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &p in &self.active {
            if !accept(p) {
                continue;
            }
            if best.is_none_or(|b| self.metric[p] < self.metric[b]) {
                best = Some(p);
            }
        }
        best
    }

    fn crc_pass(&self, p: usize) -> bool {
        self.crc.as_ref().is_none_or(|ctx| ctx.check(&self.c_of(p)))
    }

    fn result(&self, p: usize, terminated_early: Option<usize>, explored: usize) -> DecodeResult {
        let message = self.c_of(p);
        let crc_ok = self.crc.as_ref().is_none_or(|ctx| ctx.check(&message));
        DecodeResult {
            message,
            crc_ok,
            checks_ok: !self.failed[p] && terminated_early.is_none(),
            terminated_early,
            chosen_path_metric: self.metric[p],
            paths_explored: explored,
            u_hat: self.u[p * self.n..(p + 1) * self.n].to_vec(),
        }
    }
}

/// One-shot SCL decode.
pub fn scl_decode(
    llr: &[f64],
    alloc: &SubchannelAllocation,
    policy: DecoderPolicy,
    crc: Option<&CrcContext>,
) -> Result<DecodeResult> {
    ListDecoder::new(alloc, crc, policy)?.decode(llr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::assemble_u;
    use crate::decode::sc_decode_llr;
    use crate::kernel::polar_transform;
    use crate::soft::bits_to_llr;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> SubchannelAllocation {
        SubchannelAllocation::from_frozen(8, &[0, 1, 2, 4]).unwrap()
    }

    #[test]
    fn noiseless_toy() {
        let alloc = toy();
        let u = assemble_u(&alloc, &[1, 0, 1, 1]).unwrap();
        let d = polar_transform(&u).unwrap();
        for l in [1, 2, 4, 8] {
            let r =
                scl_decode(&bits_to_llr(&d, 10.0), &alloc, DecoderPolicy::new(l), None).unwrap();
            assert_eq!(r.u_hat, u);
            assert_eq!(r.message, vec![1, 0, 1, 1]);
            assert_eq!(r.chosen_path_metric, 0.0);
        }
    }

    #[test]
    fn single_path_matches_sc() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let frozen: Vec<usize> = (0..64).filter(|i| i % 3 == 0 || *i < 16).collect();
        let alloc = SubchannelAllocation::from_frozen(64, &frozen).unwrap();
        let mut dec = ListDecoder::new(&alloc, None, DecoderPolicy::new(1)).unwrap();
        for _ in 0..200 {
            let llr: Vec<f64> = (0..64).map(|_| rng.random_range(-3.0..4.0)).collect();
            let r = dec.decode(&llr).unwrap();
            assert_eq!(r.u_hat, sc_decode_llr(&llr, &alloc.frozen_mask()));
        }
    }

    #[test]
    fn path_count_bounded() {
        let alloc = toy();
        let mut dec = ListDecoder::new(&alloc, None, DecoderPolicy::new(2)).unwrap();
        dec.enable_trace(true);
        dec.decode(&[0.5, -1.0, 2.0, 0.1, -0.3, 1.0, 1.0, -2.0])
            .unwrap();
        assert_eq!(dec.path_counts().unwrap(), &[1, 1, 1, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn decoder_reusable() {
        let alloc = toy();
        let mut dec = ListDecoder::new(&alloc, None, DecoderPolicy::new(4)).unwrap();
        let llr = [0.5, -1.0, 2.0, 0.1, -0.3, 1.0, 1.0, -2.0];
        let a = dec.decode(&llr).unwrap();
        dec.decode(&[1.0; 8]).unwrap();
        assert_eq!(dec.decode(&llr).unwrap(), a);
    }

    #[test]
    fn wrong_length_rejected() {
        let mut dec = ListDecoder::new(&toy(), None, DecoderPolicy::new(2)).unwrap();
        assert!(dec.decode(&[0.0; 4]).is_err());
    }
}
