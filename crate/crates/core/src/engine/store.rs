//! Read-only clause data laid out for one fixed clause order, and the
//! two-bit-array partial assignment used by the trial loop.
//!
//! Clauses are stored back to back in `π` order so a trial walks memory with
//! stride one. Variables are renamed so that, reading the clauses in order,
//! each new variable receives the next unused index; the variables touched by
//! the first `ℓ` clauses are then exactly a prefix `0..=prefix_max[ℓ]` of the
//! assignment arrays, which is what makes prefix clearing cheap.

use crate::engine::BlendedPermutation;
use crate::error::Result;
use crate::formula::{Formula, Var};
use crate::sampling::AliasTable;

const NONE: u32 = u32::MAX;

/// Packed literal: `(relabeled var << 1) | negated`.
pub(crate) type PackedLit = u32;

#[inline]
pub(crate) fn lit_var(l: PackedLit) -> u32 {
    l >> 1
}

#[inline]
pub(crate) fn lit_positive(l: PackedLit) -> bool {
    l & 1 == 0
}

/// Clause data specialised to one permutation.
#[derive(Debug, Clone)]
pub struct ClauseStore {
    n: usize,
    lits: Vec<PackedLit>,
    offsets: Vec<u32>,
    prefix_max: Vec<u32>,
    weights: Vec<f64>,
    order: Vec<u32>,
    relabel: Vec<u32>,
    inverse: Vec<u32>,
    rho: Vec<f64>,
    unweighted: bool,
    alias: AliasTable,
    rho_phi: f64,
}

impl ClauseStore {
    /// Lays out `f` in the order given by `pi`; the alias table is built afterwards
    /// over the reordered clause weights.
    pub fn build(f: &Formula, pi: &BlendedPermutation) -> Result<Self> {
        let n = f.num_vars();
        let m = f.num_clauses();
        let order = pi.order().to_vec();
        assert_eq!(order.len(), m, "permutation size must match the clause count");

        // First and second occurrence (clause position) of each variable.
        let mut first = vec![NONE; n];
        let mut second = vec![NONE; n];
        for (pos, &ci) in order.iter().enumerate() {
            for l in f.clause(ci as usize).literals() {
                let v = l.var as usize;
                if first[v] == NONE {
                    first[v] = pos as u32;
                } else if second[v] == NONE {
                    second[v] = pos as u32;
                }
            }
        }

        // New variables of a clause get consecutive labels; those that recur
        // soonest get the smaller labels.
        let mut relabel = vec![NONE; n];
        let mut next_label = 0u32;
        let mut fresh: Vec<(u32, Var)> = Vec::new();
        for (pos, &ci) in order.iter().enumerate() {
            fresh.clear();
            fresh.extend(
                f.clause(ci as usize)
                    .literals()
                    .iter()
                    .filter(|l| first[l.var as usize] == pos as u32)
                    .map(|l| (second[l.var as usize], l.var)),
            );
            fresh.sort_unstable();
            for &(_, v) in &fresh {
                relabel[v as usize] = next_label;
                next_label += 1;
            }
        }
        // Unused variables go after every used one.
        for r in relabel.iter_mut().filter(|r| **r == NONE) {
            *r = next_label;
            next_label += 1;
        }
        let mut inverse = vec![0u32; n];
        for (old, &new) in relabel.iter().enumerate() {
            inverse[new as usize] = old as u32;
        }

        let mut lits = Vec::with_capacity(f.total_width());
        let mut offsets = Vec::with_capacity(m + 1);
        let mut prefix_max = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        let mut running_max = 0u32;
        offsets.push(0);
        for &ci in &order {
            let clause = f.clause(ci as usize);
            let start = lits.len();
            lits.extend(
                clause
                    .literals()
                    .iter()
                    .map(|l| (relabel[l.var as usize] << 1) | (!l.positive) as u32),
            );
            lits[start..].sort_unstable();
            running_max = running_max.max(lit_var(*lits.last().expect("clauses are non-empty")));
            prefix_max.push(running_max);
            offsets.push(lits.len() as u32);
            weights.push(f.clause_weight(ci as usize));
        }

        let rho: Vec<f64> = inverse.iter().map(|&old| f.weights().var(old)).collect();
        let alias = AliasTable::new(&weights)?;
        let rho_phi = f.formula_weight();

        Ok(ClauseStore {
            n,
            lits,
            offsets,
            prefix_max,
            weights,
            order,
            relabel,
            inverse,
            unweighted: f.weights().is_unweighted(),
            rho,
            alias,
            rho_phi,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_clauses(&self) -> usize {
        self.order.len()
    }

    #[inline]
    pub(crate) fn packed_clause(&self, pos: usize) -> &[PackedLit] {
        &self.lits[self.offsets[pos] as usize..self.offsets[pos + 1] as usize]
    }

    /// Clause at position `pos` as `(relabeled var, positive)` pairs.
    pub fn clause(&self, pos: usize) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.packed_clause(pos).iter().map(|&l| (lit_var(l), lit_positive(l)))
    }

    pub fn width(&self, pos: usize) -> usize {
        (self.offsets[pos + 1] - self.offsets[pos]) as usize
    }

    /// Largest relabeled variable among the clauses at positions `0..=pos`.
    pub fn prefix_max(&self) -> &[u32] {
        &self.prefix_max
    }

    /// `ρ(C)` of the clause at each position.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Original clause index at each position.
    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn relabel(&self, old: Var) -> u32 {
        self.relabel[old as usize]
    }

    pub fn original_var(&self, new: u32) -> Var {
        self.inverse[new as usize]
    }

    /// `ρ` of a relabeled variable.
    #[inline]
    pub fn rho(&self, v: u32) -> f64 {
        self.rho[v as usize]
    }

    pub fn is_unweighted(&self) -> bool {
        self.unweighted
    }

    pub fn alias(&self) -> &AliasTable {
        &self.alias
    }

    /// `ρ(Φ)`, summed over the source formula.
    pub fn rho_phi(&self) -> f64 {
        self.rho_phi
    }
}

/// Bit array over `u64` words.
#[derive(Debug, Clone)]
pub(crate) struct BitArray {
    words: Vec<u64>,
}

impl BitArray {
    pub(crate) fn new(bits: usize) -> Self {
        BitArray { words: vec![0; bits.div_ceil(64).max(1)] }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize) -> bool {
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, b: bool) {
        let w = &mut self.words[i >> 6];
        let mask = 1u64 << (i & 63);
        if b {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Zeroes every word that holds a bit in `0..=last`.
    #[inline]
    pub(crate) fn clear_through(&mut self, last: usize) {
        let end = (last >> 6) + 1;
        self.words[..end].fill(0);
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

/// Partial assignment over relabeled variables: a value bit and an assigned bit per variable.
///
/// Between trials both arrays are all zero, and an unassigned variable always has value 0.
#[derive(Debug, Clone)]
pub struct LazyAssignment {
    value: BitArray,
    assigned: BitArray,
    n: usize,
}

impl LazyAssignment {
    pub fn new(n: usize) -> Self {
        LazyAssignment { value: BitArray::new(n), assigned: BitArray::new(n), n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, v: u32) -> Option<bool> {
        let v = v as usize;
        self.assigned.get(v).then(|| self.value.get(v))
    }

    #[inline]
    pub fn assign(&mut self, v: u32, b: bool) {
        let v = v as usize;
        self.assigned.set(v, true);
        self.value.set(v, b);
    }

    #[inline]
    pub fn unassign(&mut self, v: u32) {
        let v = v as usize;
        self.assigned.set(v, false);
        self.value.set(v, false);
    }

    /// Zeroes the contiguous block holding variables `0..=last`.
    #[inline]
    pub fn clear_prefix(&mut self, last: u32) {
        self.assigned.clear_through(last as usize);
        self.value.clear_through(last as usize);
    }

    /// Full scan: both arrays zero.
    pub fn is_clear(&self) -> bool {
        self.assigned.is_zero() && self.value.is_zero()
    }

    /// Full-width clear, used by the eager baseline.
    pub(crate) fn clear_all(&mut self) {
        if self.n > 0 {
            self.clear_prefix(self.n as u32 - 1);
        }
    }
}
