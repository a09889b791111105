//! Exhaustive streams over a finite field: subspaces of each dimension (via
//! RREF profiles) and unordered bases. Orders are fixed so that every
//! consumer sees the same sequence, and the subspace stream splits into
//! disjoint [`Profile`] chunks for parallel folds.

use super::{LinalgError, Matrix, Subspace};
use crate::budget::{BudgetExceeded, BudgetKind};
use crate::field::{Field, FieldSpec, PrimeField};

/// Number of `k`-dimensional subspaces of `GF(q)^n`, saturating at `u128::MAX`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let q = q as u128;
    // prod_{i<k} (q^{n-i} - 1) / (q^{i+1} - 1), kept integral by dividing as we go
    let mut acc: u128 = 1;
    for i in 0..k {
        let num = match pow_sat(q, (n - i) as u32).checked_sub(1) {
            Some(x) => x,
            None => return u128::MAX,
        };
        let den = pow_sat(q, (i + 1) as u32) - 1;
        acc = match acc.checked_mul(num) {
            Some(x) => x / den,
            None => return u128::MAX,
        };
    }
    acc
}

fn pow_sat(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

/// `|GL(n, q)|`, saturating.
pub fn gl_order(n: usize, q: u64) -> u128 {
    let q = q as u128;
    let qn = pow_sat(q, n as u32);
    (0..n).fold(1u128, |acc, i| {
        acc.saturating_mul(qn.saturating_sub(pow_sat(q, i as u32)))
    })
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |a, b| a.saturating_mul(b))
}

/// Number of unordered bases of `GF(q)^n`: `|GL(n,q)| / n!`.
pub fn unordered_basis_count(n: usize, q: u64) -> u128 {
    gl_order(n, q) / factorial(n)
}

/// Number of unordered bases up to rescaling each vector: `|GL(n,q)| / ((q-1)^n n!)`.
pub fn projective_basis_count(n: usize, q: u64) -> u128 {
    let scalings = pow_sat((q - 1) as u128, n as u32);
    gl_order(n, q) / scalings / factorial(n)
}

pub fn subspace_count(n: usize, dims: &[usize], q: u64) -> u128 {
    dims.iter()
        .fold(0u128, |acc, &k| acc.saturating_add(gaussian_binomial(n, k, q)))
}

/// All vectors of `GF(p)^n` in increasing base-`p` order, first coordinate most significant.
pub fn all_vectors(field: PrimeField, n: usize) -> Vec<Vec<u32>> {
    let p = field.modulus();
    let total = (p as u64).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0u32; n];
            for slot in v.iter_mut().rev() {
                *slot = (code % p as u64) as u32;
                code /= p as u64;
            }
            v
        })
        .collect()
}

/// Representatives of the lines of `GF(p)^n`: nonzero vectors whose first nonzero entry is 1.
pub fn projective_points(field: PrimeField, n: usize) -> Vec<Vec<u32>> {
    all_vectors(field, n)
        .into_iter()
        .filter(|v| v.iter().find(|x| **x != 0) == Some(&1))
        .collect()
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // rightmost slot that can still move
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// One RREF shape: a pivot-column set plus the positions of its free entries.
/// Every subspace of dimension `pivots.len()` has exactly one profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    field: PrimeField,
    ambient: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
}

impl Profile {
    pub fn new(field: PrimeField, ambient: usize, pivots: Vec<usize>) -> Self {
        let mut free = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in p + 1..ambient {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        Profile {
            field,
            ambient,
            pivots,
            free,
        }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of subspaces with this profile, `p^(free entries)`.
    pub fn len(&self) -> u128 {
        pow_sat(self.field.modulus() as u128, self.free.len() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> ProfileIter<'_> {
        ProfileIter {
            profile: self,
            filling: vec![0; self.free.len()],
            done: false,
        }
    }

    fn build(&self, filling: &[u32]) -> Subspace<PrimeField> {
        let k = self.pivots.len();
        let mut data = vec![0u32; k * self.ambient];
        for (r, &p) in self.pivots.iter().enumerate() {
            data[r * self.ambient + p] = 1;
        }
        for (&(r, c), &v) in self.free.iter().zip(filling) {
            data[r * self.ambient + c] = v;
        }
        Subspace::from_rref_unchecked(Matrix::new(self.field, k, self.ambient, data).expect("shape"))
    }
}

/// Subspaces of one profile, free entries counted like an odometer (first entry most significant).
pub struct ProfileIter<'a> {
    profile: &'a Profile,
    filling: Vec<u32>,
    done: bool,
}

impl Iterator for ProfileIter<'_> {
    type Item = Subspace<PrimeField>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.profile.build(&self.filling);
        let p = self.profile.field.modulus();
        self.done = true;
        for slot in self.filling.iter_mut().rev() {
            *slot += 1;
            if *slot < p {
                self.done = false;
                break;
            }
            *slot = 0;
        }
        Some(out)
    }
}

/// All profiles of dimension `k` in `GF(p)^n`, pivot sets in lexicographic order.
pub fn profiles(field: PrimeField, n: usize, k: usize) -> Vec<Profile> {
    k_subsets(n, k)
        .into_iter()
        .map(|pivots| Profile::new(field, n, pivots))
        .collect()
}

/// Every subspace of each requested dimension exactly once: dimensions
/// ascending, then pivot sets lexicographically, then free-entry fillings.
pub struct SubspaceStream {
    chunks: Vec<Profile>,
    chunk: usize,
    filling: Vec<u32>,
    exhausted_chunk: bool,
}

impl SubspaceStream {
    pub fn new(field: PrimeField, ambient: usize, dims: &[usize]) -> Self {
        let mut dims: Vec<usize> = dims.iter().copied().filter(|&k| k <= ambient).collect();
        dims.sort_unstable();
        dims.dedup();
        let chunks: Vec<Profile> = dims.iter().flat_map(|&k| profiles(field, ambient, k)).collect();
        let filling = chunks.first().map(|c| vec![0; c.free.len()]).unwrap_or_default();
        SubspaceStream {
            chunks,
            chunk: 0,
            filling,
            exhausted_chunk: false,
        }
    }

    /// The disjoint chunks whose concatenation, in order, is this stream.
    pub fn chunks(&self) -> &[Profile] {
        &self.chunks
    }

    pub fn total(&self) -> u128 {
        self.chunks.iter().fold(0u128, |a, c| a.saturating_add(c.len()))
    }
}

impl Iterator for SubspaceStream {
    type Item = Subspace<PrimeField>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let profile = self.chunks.get(self.chunk)?;
            if self.exhausted_chunk {
                self.chunk += 1;
                self.exhausted_chunk = false;
                if let Some(c) = self.chunks.get(self.chunk) {
                    self.filling = vec![0; c.free.len()];
                }
                continue;
            }
            let out = profile.build(&self.filling);
            let p = profile.field.modulus();
            self.exhausted_chunk = true;
            for slot in self.filling.iter_mut().rev() {
                *slot += 1;
                if *slot < p {
                    self.exhausted_chunk = false;
                    break;
                }
                *slot = 0;
            }
            return Some(out);
        }
    }
}

fn prime_field_of(spec: &FieldSpec) -> Result<PrimeField, LinalgError> {
    match *spec {
        FieldSpec::Prime(p) => Ok(PrimeField::new(p)?),
        FieldSpec::Rational => Err(LinalgError::NonEnumerable(*spec)),
    }
}

/// Stream of all subspaces of `field^n` with dimension in `dims`; the rationals are rejected.
pub fn enumerate_subspaces(ambient: usize, dims: &[usize], field: &FieldSpec) -> Result<SubspaceStream, LinalgError> {
    Ok(SubspaceStream::new(prime_field_of(field)?, ambient, dims))
}

/// Reduces `v` against echelon rows; returns the normalized remainder and its pivot if nonzero.
pub(crate) fn reduce_against(field: &PrimeField, rows: &[(Vec<u32>, usize)], v: &[u32]) -> Option<(Vec<u32>, usize)> {
    let mut x = v.to_vec();
    for (row, p) in rows {
        let c = x[*p];
        if c == 0 {
            continue;
        }
        for (xi, ri) in x.iter_mut().zip(row) {
            *xi = field.sub(xi, &field.mul(&c, ri));
        }
    }
    let pivot = x.iter().position(|e| *e != 0)?;
    let inv = field.inv(&x[pivot]).expect("nonzero");
    for e in x.iter_mut() {
        *e = field.mul(e, &inv);
    }
    Some((x, pivot))
}

/// Linearly independent `size`-subsets of a candidate list, as increasing index
/// tuples in lexicographic order.
pub struct IndependentSets {
    field: PrimeField,
    candidates: Vec<Vec<u32>>,
    size: usize,
    stack: Vec<usize>,
    echelon: Vec<(Vec<u32>, usize)>,
    started: bool,
    done: bool,
}

impl IndependentSets {
    pub fn new(field: PrimeField, candidates: Vec<Vec<u32>>, size: usize) -> Self {
        IndependentSets {
            field,
            candidates,
            size,
            stack: Vec::new(),
            echelon: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn pop(&mut self) -> Option<usize> {
        self.echelon.pop();
        self.stack.pop()
    }
}

impl Iterator for IndependentSets {
    type Item = Vec<Vec<u32>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut start = if !self.started {
            self.started = true;
            0
        } else {
            match self.pop() {
                Some(last) => last + 1,
                None => {
                    self.done = true;
                    return None;
                }
            }
        };
        loop {
            let depth = self.stack.len();
            if depth == self.size {
                return Some(self.stack.iter().map(|&i| self.candidates[i].clone()).collect());
            }
            let needed = self.size - depth;
            let mut found = None;
            let mut i = start;
            while i + needed <= self.candidates.len() {
                if let Some(red) = reduce_against(&self.field, &self.echelon, &self.candidates[i]) {
                    found = Some((i, red));
                    break;
                }
                i += 1;
            }
            match found {
                Some((i, red)) => {
                    self.stack.push(i);
                    self.echelon.push(red);
                    start = i + 1;
                }
                None => match self.pop() {
                    Some(last) => start = last + 1,
                    None => {
                        self.done = true;
                        return None;
                    }
                },
            }
        }
    }
}

/// Every unordered basis of `field^n` exactly once (`|GL(n,p)| / n!` of them),
/// refusing to start when that count exceeds `budget`.
pub fn enumerate_unordered_bases(n: usize, field: &FieldSpec, budget: u64) -> Result<IndependentSets, LinalgError> {
    let f = prime_field_of(field)?;
    let needed = unordered_basis_count(n, f.order());
    if needed > budget as u128 {
        return Err(BudgetExceeded {
            kind: BudgetKind::Bases,
            needed,
            limit: budget,
        }
        .into());
    }
    let nonzero = all_vectors(f, n).into_iter().skip(1).collect();
    Ok(IndependentSets::new(f, nonzero, n))
}
