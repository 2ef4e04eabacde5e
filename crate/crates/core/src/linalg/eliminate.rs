//! Sparse Gaussian elimination with Markowitz-style pivoting.
//!
//! The matrix is first split into connected components of its bipartite
//! row/column graph; components are eliminated independently (in parallel)
//! and their ranks summed.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::field::{inv_mod, is_prime, mul_mod, sub_mod, FieldSpec, Scalar};

use super::SparseMatrix;

/// Seed for the deterministic choice of the auxiliary 62-bit prime.
const PREPASS_SEED: u64 = 0x5eed_7a7e_0000_0001;

/// Coefficient arithmetic needed by the elimination kernel.
trait Arith: Sync {
    type E: Clone + Send + Sync;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn div(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - f * b`
    fn sub_mul(&self, a: &Self::E, f: &Self::E, b: &Self::E) -> Self::E;
    /// `-f * b`
    fn neg_mul(&self, f: &Self::E, b: &Self::E) -> Self::E;
}

struct ModP(u64);

impl Arith for ModP {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn div(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, inv_mod(*b, self.0), self.0)
    }
    fn sub_mul(&self, a: &u64, f: &u64, b: &u64) -> u64 {
        sub_mod(*a, mul_mod(*f, *b, self.0), self.0)
    }
    fn neg_mul(&self, f: &u64, b: &u64) -> u64 {
        sub_mod(0, mul_mod(*f, *b, self.0), self.0)
    }
}

struct Rationals;

impl Arith for Rationals {
    type E = BigRational;
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn div(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a / b
    }
    fn sub_mul(&self, a: &BigRational, f: &BigRational, b: &BigRational) -> BigRational {
        a - f * b
    }
    fn neg_mul(&self, f: &BigRational, b: &BigRational) -> BigRational {
        -(f * b)
    }
}

/// One connected block with local row/column numbering.
struct Component<E> {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, E)>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn components<E: Clone>(rows: usize, cols: usize, entries: Vec<(usize, usize, E)>) -> Vec<Component<E>> {
    let mut parent: Vec<usize> = (0..rows + cols).collect();
    for (r, c, _) in &entries {
        let (a, b) = (find(&mut parent, *r), find(&mut parent, rows + c));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut comp_of_root = vec![usize::MAX; rows + cols];
    let mut local = vec![u32::MAX; rows + cols];
    let mut comps: Vec<Component<E>> = Vec::new();
    for (r, c, v) in entries {
        let root = find(&mut parent, r);
        if comp_of_root[root] == usize::MAX {
            comp_of_root[root] = comps.len();
            comps.push(Component {
                rows: 0,
                cols: 0,
                entries: Vec::new(),
            });
        }
        let comp = &mut comps[comp_of_root[root]];
        if local[r] == u32::MAX {
            local[r] = comp.rows as u32;
            comp.rows += 1;
        }
        if local[rows + c] == u32::MAX {
            local[rows + c] = comp.cols as u32;
            comp.cols += 1;
        }
        comp.entries.push((local[r], local[rows + c], v));
    }
    comps
}

/// Rank of one component by sparse elimination.
///
/// Pivot choice follows Markowitz: the best candidate from the sparsest live
/// column and the one from the shortest live row are compared by
/// `(row_len - 1) * (col_count - 1)`. Both heaps hold stale entries that are
/// discarded lazily. Ties break on the smaller index, so the run is
/// deterministic.
fn eliminate<A: Arith>(ar: &A, comp: Component<A::E>) -> usize {
    let (nrows, ncols) = (comp.rows, comp.cols);
    let mut rows: Vec<Vec<(u32, A::E)>> = vec![Vec::new(); nrows];
    for (r, c, v) in comp.entries {
        rows[r as usize].push((c, v));
    }
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut col_count = vec![0u32; ncols];
    for (r, row) in rows.iter_mut().enumerate() {
        row.sort_by_key(|e| e.0);
        for (c, _) in row.iter() {
            col_rows[*c as usize].push(r as u32);
            col_count[*c as usize] += 1;
        }
    }
    let mut row_alive = vec![true; nrows];
    let mut col_done = vec![false; ncols];
    let mut col_heap: BinaryHeap<Reverse<(u32, u32)>> = (0..ncols).map(|c| Reverse((col_count[c], c as u32))).collect();
    let mut row_heap: BinaryHeap<Reverse<(u32, u32)>> =
        (0..nrows).map(|r| Reverse((rows[r].len() as u32, r as u32))).collect();
    let mut rank = 0;

    loop {
        let best_col = loop {
            match col_heap.peek() {
                None => break None,
                Some(&Reverse((cnt, c))) => {
                    if col_done[c as usize] || col_count[c as usize] != cnt || cnt == 0 {
                        col_heap.pop();
                    } else {
                        break Some((cnt, c as usize));
                    }
                }
            }
        };
        let best_row = loop {
            match row_heap.peek() {
                None => break None,
                Some(&Reverse((len, r))) => {
                    let r = r as usize;
                    if !row_alive[r] || rows[r].len() as u32 != len || len == 0 {
                        row_heap.pop();
                    } else {
                        break Some((len, r));
                    }
                }
            }
        };
        let mut choice: Option<(u64, usize, usize)> = None;
        if let Some((cnt, c)) = best_col {
            let list = &mut col_rows[c];
            list.retain(|&r| {
                row_alive[r as usize] && rows[r as usize].binary_search_by_key(&(c as u32), |e| e.0).is_ok()
            });
            list.sort_unstable();
            list.dedup();
            debug_assert_eq!(list.len() as u32, cnt);
            let r = *list.iter().min_by_key(|&&r| (rows[r as usize].len(), r)).unwrap() as usize;
            let cost = (rows[r].len() as u64 - 1) * (cnt as u64 - 1);
            choice = Some((cost, r, c));
        }
        if let Some((len, r)) = best_row {
            let c = rows[r]
                .iter()
                .map(|e| e.0 as usize)
                .min_by_key(|&c| (col_count[c], c))
                .unwrap();
            let cost = (len as u64 - 1) * (col_count[c] as u64 - 1);
            if choice.is_none_or(|(best, _, _)| cost < best) {
                choice = Some((cost, r, c));
            }
        }
        let Some((_, r, c)) = choice else { break };

        rank += 1;
        let pivot_row = std::mem::take(&mut rows[r]);
        row_alive[r] = false;
        let pv = pivot_row[pivot_row.binary_search_by_key(&(c as u32), |e| e.0).unwrap()]
            .1
            .clone();
        let mut others = std::mem::take(&mut col_rows[c]);
        others.retain(|&r2| {
            r2 as usize != r
                && row_alive[r2 as usize]
                && rows[r2 as usize].binary_search_by_key(&(c as u32), |e| e.0).is_ok()
        });
        others.sort_unstable();
        others.dedup();

        for &r2 in &others {
            let r2 = r2 as usize;
            let old = std::mem::take(&mut rows[r2]);
            let at = old.binary_search_by_key(&(c as u32), |e| e.0).unwrap();
            let f = ar.div(&old[at].1, &pv);
            let mut merged = Vec::with_capacity(old.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < pivot_row.len() {
                let ci = old.get(i).map_or(u32::MAX, |e| e.0);
                let cj = pivot_row.get(j).map_or(u32::MAX, |e| e.0);
                if ci < cj {
                    merged.push(old[i].clone());
                    i += 1;
                } else if cj < ci {
                    merged.push((cj, ar.neg_mul(&f, &pivot_row[j].1)));
                    col_count[cj as usize] += 1;
                    col_rows[cj as usize].push(r2 as u32);
                    col_heap.push(Reverse((col_count[cj as usize], cj)));
                    j += 1;
                } else {
                    if ci != c as u32 {
                        let v = ar.sub_mul(&old[i].1, &f, &pivot_row[j].1);
                        if ar.is_zero(&v) {
                            col_count[ci as usize] -= 1;
                            col_heap.push(Reverse((col_count[ci as usize], ci)));
                        } else {
                            merged.push((ci, v));
                        }
                    } else {
                        col_count[ci as usize] -= 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
            row_heap.push(Reverse((merged.len() as u32, r2 as u32)));
            rows[r2] = merged;
        }
        for (c2, _) in &pivot_row {
            col_count[*c2 as usize] -= 1;
            col_heap.push(Reverse((col_count[*c2 as usize], *c2)));
        }
        debug_assert_eq!(col_count[c], 0);
        col_done[c] = true;
    }
    rank
}

fn rank_with<A: Arith>(ar: &A, comps: Vec<Component<A::E>>) -> usize {
    comps.into_par_iter().map(|comp| eliminate(ar, comp)).sum()
}

/// The auxiliary prime for the rational pre-pass: the first prime found by a
/// fixed-seed random walk over 62-bit odd integers.
pub(crate) fn prepass_prime() -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(PREPASS_SEED);
    loop {
        let n = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        if is_prime(n) {
            return n;
        }
    }
}

/// Exact rank over a prime field, treating the entries as residues mod `p`.
fn rank_mod_p(m: &SparseMatrix, p: u64) -> Option<usize> {
    let entries = m
        .entries()
        .iter()
        .map(|(r, c, v)| v.reduce_mod(p).map(|x| (*r, *c, x)))
        .collect::<Option<Vec<_>>>()?;
    let entries: Vec<_> = entries.into_iter().filter(|e| e.2 != 0).collect();
    Some(rank_with(&ModP(p), components(m.rows(), m.cols(), entries)))
}

pub(crate) fn rank(m: &SparseMatrix) -> usize {
    match m.field() {
        FieldSpec::Prime(p) => rank_mod_p(m, p).expect("entries lie in the field"),
        FieldSpec::Rational => {
            // Reduction mod p can only lose rank, so a full mod-p rank is a
            // certificate for the rational rank.
            let full = m.rows().min(m.cols());
            if let Some(r) = rank_mod_p(m, prepass_prime()) {
                if r == full {
                    return r;
                }
            }
            let entries = m
                .entries()
                .iter()
                .map(|(r, c, v)| match v {
                    Scalar::Rational(x) => (*r, *c, x.clone()),
                    Scalar::Residue { .. } => unreachable!("rational matrix holds a residue"),
                })
                .collect();
            rank_with(&Rationals, components(m.rows(), m.cols(), entries))
        }
    }
}

/// Rank of a rational matrix modulo the pre-pass prime; a lower bound for the
/// exact rank, exposed for diagnostics.
pub fn modular_rank_bound(m: &SparseMatrix) -> Option<usize> {
    match m.field() {
        FieldSpec::Prime(p) => rank_mod_p(m, p),
        FieldSpec::Rational => rank_mod_p(m, prepass_prime()),
    }
}
