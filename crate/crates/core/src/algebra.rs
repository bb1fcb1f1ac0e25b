//! Finite abelian 2-groups, their endomorphisms and automorphisms, and
//! linear algebra over the residue rings Z/2^e.
//!
//! Groups are products of cyclic 2-groups given by a non-increasing exponent
//! signature. Endomorphisms are integer matrices reduced modulo the per-row
//! component moduli. Kernels of linear systems over Z/2^e are computed by
//! bitset Gaussian elimination (e = 1) or Howell-style row reduction (e >= 2).

use std::collections::{HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry ({0},{1}) does not define a homomorphism on the component generators")]
    InvalidEntry(usize, usize),
    #[error("group of order {0} too large for exhaustive enumeration")]
    GroupTooLarge(u64),
    #[error("automorphism group too large")]
    AutGroupTooLarge,
    #[error("modulus {0} is not a power of two")]
    BadModulus(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A finite abelian 2-group `Z_{2^{k_1}} x ... x Z_{2^{k_n}}` with
/// `k_1 >= k_2 >= ... >= k_n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup2 {
    signature: Vec<u32>,
    moduli: Vec<u64>,
    order: u64,
}

/// An element of an [`AbelianGroup2`], one reduced residue per component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn from_coords(g: &AbelianGroup2, coords: Vec<u64>) -> Result<Self, AlgebraError> {
        if coords.len() != g.rank() {
            return Err(AlgebraError::DimensionMismatch(format!(
                "element has {} coordinates, group has rank {}",
                coords.len(),
                g.rank()
            )));
        }
        let coords = coords
            .iter()
            .zip(&g.moduli)
            .map(|(c, m)| c % m)
            .collect();
        Ok(GroupElement { coords })
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", strs.join(","))
    }
}

impl AbelianGroup2 {
    pub fn new(signature: Vec<u32>) -> Result<Self, AlgebraError> {
        if signature.is_empty() {
            // the trivial group, rank 0
            return Ok(AbelianGroup2 {
                signature,
                moduli: vec![],
                order: 1,
            });
        }
        if signature.windows(2).any(|w| w[0] < w[1]) {
            return Err(AlgebraError::InvalidSignature(
                "signature must be non-increasing".into(),
            ));
        }
        if signature.iter().any(|&k| k == 0) {
            return Err(AlgebraError::InvalidSignature(
                "exponents must be >= 1".into(),
            ));
        }
        let total: u32 = signature.iter().sum();
        if total > 30 {
            return Err(AlgebraError::InvalidSignature(format!(
                "group order 2^{total} out of supported range"
            )));
        }
        let moduli: Vec<u64> = signature.iter().map(|&k| 1u64 << k).collect();
        let order = moduli.iter().product();
        Ok(AbelianGroup2 {
            signature,
            moduli,
            order,
        })
    }

    /// Elementary abelian group `Z_2^n`.
    pub fn elementary(n: usize) -> Self {
        AbelianGroup2::new(vec![1; n]).unwrap()
    }

    pub fn signature(&self) -> &[u32] {
        &self.signature
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.signature.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// All component exponents equal.
    pub fn is_homocyclic(&self) -> bool {
        self.signature.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_elementary(&self) -> bool {
        self.signature.iter().all(|&k| k == 1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// Lexicographic element indexing: the first coordinate is most significant.
    pub fn element(&self, index: u64) -> GroupElement {
        debug_assert!(index < self.order);
        let mut coords = vec![0u64; self.rank()];
        let mut rest = index;
        for i in (0..self.rank()).rev() {
            coords[i] = rest % self.moduli[i];
            rest /= self.moduli[i];
        }
        GroupElement { coords }
    }

    pub fn index_of(&self, x: &GroupElement) -> u64 {
        debug_assert_eq!(x.coords.len(), self.rank());
        let mut idx = 0u64;
        for i in 0..self.rank() {
            idx = idx * self.moduli[i] + x.coords[i];
        }
        idx
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, AlgebraError> {
        if x.coords.len() != self.rank() || y.coords.len() != self.rank() {
            return Err(AlgebraError::DimensionMismatch(
                "group_add operands do not match the group rank".into(),
            ));
        }
        let coords = (0..self.rank())
            .map(|i| (x.coords[i] + y.coords[i]) % self.moduli[i])
            .collect();
        Ok(GroupElement { coords })
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        let coords = (0..self.rank())
            .map(|i| (self.moduli[i] - x.coords[i]) % self.moduli[i])
            .collect();
        GroupElement { coords }
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, AlgebraError> {
        self.add(x, &self.neg(y))
    }
}

/// All signatures (non-increasing exponent vectors) of the given 2-power order.
pub fn signatures_of_order(log2_order: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            prefix.push(k);
            rec(rest - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(log2_order, log2_order, &mut Vec::new(), &mut out);
    out
}

/// An endomorphism of an [`AbelianGroup2`] as an n x n integer matrix.
///
/// Entry (i,j) acts on coordinate j of the argument and contributes to
/// coordinate i of the image, reduced mod `2^{k_i}`. When `k_i > k_j` the
/// entry must be divisible by `2^{k_i - k_j}`, otherwise the columns do not
/// define homomorphisms on the component generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EndoMatrix {
    group: AbelianGroup2,
    entries: Vec<u64>, // row-major n x n
}

impl EndoMatrix {
    pub fn new(group: AbelianGroup2, entries: Vec<u64>) -> Result<Self, AlgebraError> {
        let n = group.rank();
        if entries.len() != n * n {
            return Err(AlgebraError::DimensionMismatch(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let mut reduced = entries;
        for i in 0..n {
            for j in 0..n {
                let e = &mut reduced[i * n + j];
                *e %= group.moduli[i];
                let (ki, kj) = (group.signature[i], group.signature[j]);
                if ki > kj && *e % (1u64 << (ki - kj)) != 0 {
                    return Err(AlgebraError::InvalidEntry(i, j));
                }
            }
        }
        Ok(EndoMatrix {
            group,
            entries: reduced,
        })
    }

    pub fn identity(group: AbelianGroup2) -> Self {
        let n = group.rank();
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        EndoMatrix { group, entries }
    }

    pub fn group(&self) -> &AbelianGroup2 {
        &self.group
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.group.rank() + j]
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement, AlgebraError> {
        let n = self.group.rank();
        if x.coords.len() != n {
            return Err(AlgebraError::DimensionMismatch(
                "endo_apply argument does not match the group rank".into(),
            ));
        }
        let mut coords = vec![0u64; n];
        for i in 0..n {
            let mut acc = 0u64;
            for j in 0..n {
                acc = (acc + self.entries[i * n + j] * x.coords[j]) % self.group.moduli[i];
            }
            coords[i] = acc;
        }
        Ok(GroupElement { coords })
    }

    /// The endomorphism `1 - self`.
    pub fn one_minus(&self) -> EndoMatrix {
        let n = self.group.rank();
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let m = self.group.moduli[i];
                let delta = if i == j { 1 } else { 0 };
                entries[i * n + j] = (m + delta - self.entries[i * n + j]) % m;
            }
        }
        EndoMatrix {
            group: self.group.clone(),
            entries,
        }
    }

    /// Matrix product `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &EndoMatrix) -> Result<EndoMatrix, AlgebraError> {
        if self.group != other.group {
            return Err(AlgebraError::DimensionMismatch(
                "composition of endomorphisms of different groups".into(),
            ));
        }
        let n = self.group.rank();
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc = (acc + self.entries[i * n + k] * other.entries[k * n + j])
                        % self.group.moduli[i];
                }
                entries[i * n + j] = acc;
            }
        }
        EndoMatrix::new(self.group.clone(), entries)
    }

    /// Image permutation on element indices; `None` when not bijective.
    pub fn as_permutation(&self) -> Option<Vec<u32>> {
        let order = self.group.order() as usize;
        let mut perm = vec![0u32; order];
        let mut seen = vec![false; order];
        for idx in 0..order {
            let x = self.group.element(idx as u64);
            let y = self.apply(&x).expect("rank matches");
            let yi = self.group.index_of(&y) as usize;
            if seen[yi] {
                return None;
            }
            seen[yi] = true;
            perm[idx] = yi as u32;
        }
        Some(perm)
    }

    /// True iff the endomorphism is a permutation of the group. For
    /// homocyclic groups this reduces to the determinant being odd; mixed
    /// signatures fall back to an exhaustive image check.
    pub fn is_bijective(&self) -> bool {
        if self.group.rank() == 0 {
            return true;
        }
        if self.group.is_homocyclic() {
            det_mod2(&self.entries, self.group.rank())
        } else {
            self.as_permutation().is_some()
        }
    }

    pub fn is_admissible(&self) -> bool {
        self.is_bijective() && self.one_minus().is_bijective()
    }

    /// Inverse automorphism, computed from the inverse element permutation.
    pub fn inverse(&self) -> Option<EndoMatrix> {
        let perm = self.as_permutation()?;
        let order = self.group.order() as usize;
        let mut inv = vec![0u32; order];
        for (i, &p) in perm.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        // column j of the inverse = preimage of the j-th generator
        let n = self.group.rank();
        let mut entries = vec![0u64; n * n];
        for j in 0..n {
            let mut gen = self.group.zero();
            gen.coords[j] = 1;
            let gi = self.group.index_of(&gen) as usize;
            let pre = self.group.element(inv[gi] as u64);
            for i in 0..n {
                entries[i * n + j] = pre.coords[i];
            }
        }
        EndoMatrix::new(self.group.clone(), entries).ok()
    }

    /// Compact key for orbit bookkeeping. Fails if the packed entries exceed 64 bits.
    fn key(&self) -> Option<u64> {
        let n = self.group.rank();
        let mut key: u64 = 0;
        let mut bits = 0u32;
        for i in 0..n {
            let w = self.group.signature[i];
            for j in 0..n {
                bits += w;
                if bits > 64 {
                    return None;
                }
                key = (key << w) | self.entries[i * n + j];
            }
        }
        Some(key)
    }
}

/// Determinant over GF(2) of the mod-2 reduction of a square integer matrix.
fn det_mod2(entries: &[u64], n: usize) -> bool {
    debug_assert!(n <= 64);
    let mut rows: Vec<u64> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (entries[i * n + j] & 1) << j)
                .fold(0u64, |a, b| a | b)
        })
        .collect();
    for c in 0..n {
        let pivot = match (c..n).find(|&r| rows[r] >> c & 1 == 1) {
            Some(r) => r,
            None => return false,
        };
        rows.swap(c, pivot);
        for r in 0..n {
            if r != c && rows[r] >> c & 1 == 1 {
                rows[r] ^= rows[c];
            }
        }
    }
    true
}

/// Iterate all valid endomorphism matrices of `g`.
///
/// The number of candidates is `prod 2^{min(k_i,k_j)}`; the enumeration is
/// refused beyond 2^22 candidates.
fn enumerate_endomorphisms(g: &AbelianGroup2) -> Result<Vec<EndoMatrix>, AlgebraError> {
    let n = g.rank();
    let mut total_bits = 0u32;
    for i in 0..n {
        for j in 0..n {
            total_bits += g.signature[i].min(g.signature[j]);
        }
    }
    if total_bits > 22 {
        return Err(AlgebraError::GroupTooLarge(g.order()));
    }
    // per-entry value lists: when k_i > k_j only multiples of 2^{k_i-k_j}
    let mut choices: Vec<Vec<u64>> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (ki, kj) = (g.signature[i], g.signature[j]);
            let step = if ki > kj { 1u64 << (ki - kj) } else { 1 };
            choices.push((0..g.moduli[i]).step_by(step as usize).collect());
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n * n];
    loop {
        let entries: Vec<u64> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        out.push(EndoMatrix {
            group: g.clone(),
            entries,
        });
        // odometer
        let mut pos = n * n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All automorphisms of `g`, by exhaustive enumeration.
pub fn enumerate_automorphisms(g: &AbelianGroup2) -> Result<Vec<EndoMatrix>, AlgebraError> {
    Ok(enumerate_endomorphisms(g)?
        .into_iter()
        .filter(|m| m.is_bijective())
        .collect())
}

/// All automorphisms psi of `g` with `1 - psi` bijective.
///
/// Empty for non-admissible groups (in particular whenever `k_1 > k_2`).
pub fn admissible_automorphisms(g: &AbelianGroup2) -> Result<Vec<EndoMatrix>, AlgebraError> {
    if g.order() > 1 << 10 {
        return Err(AlgebraError::GroupTooLarge(g.order()));
    }
    Ok(enumerate_endomorphisms(g)?
        .into_iter()
        .filter(|m| m.is_admissible())
        .collect())
}

/// Cheap existence check: is there any admissible automorphism of `g`?
///
/// Same enumeration as [`admissible_automorphisms`], stopping at the first
/// hit; for elementary abelian groups it runs on bit-packed matrices.
pub fn has_admissible_automorphism(g: &AbelianGroup2) -> Result<bool, AlgebraError> {
    if g.is_elementary() && g.rank() >= 2 {
        let n = g.rank();
        if n > 5 {
            return Err(AlgebraError::GroupTooLarge(g.order()));
        }
        let id = bm_identity(n);
        for m in 0u32..1 << (n * n) {
            if bm_invertible(m, n) && bm_invertible(m ^ id, n) {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    Ok(!admissible_automorphisms(g)?.is_empty())
}

// --- bit-packed matrices over GF(2), row-major bit i*n+j ---

fn bm_identity(n: usize) -> u32 {
    (0..n).fold(0u32, |a, i| a | 1 << (i * n + i))
}

fn bm_row(m: u32, n: usize, i: usize) -> u32 {
    (m >> (i * n)) & ((1 << n) - 1)
}

fn bm_invertible(m: u32, n: usize) -> bool {
    let mut rows: Vec<u32> = (0..n).map(|i| bm_row(m, n, i)).collect();
    for c in 0..n {
        let pivot = match (c..n).find(|&r| rows[r] >> c & 1 == 1) {
            Some(r) => r,
            None => return false,
        };
        rows.swap(c, pivot);
        for r in 0..n {
            if r != c && rows[r] >> c & 1 == 1 {
                rows[r] ^= rows[c];
            }
        }
    }
    true
}

fn bm_mul(a: u32, b: u32, n: usize) -> u32 {
    let mut out = 0u32;
    for i in 0..n {
        let ra = bm_row(a, n, i);
        let mut row = 0u32;
        for k in 0..n {
            if ra >> k & 1 == 1 {
                row ^= bm_row(b, n, k);
            }
        }
        out |= row << (i * n);
    }
    out
}

fn bm_inverse(m: u32, n: usize) -> Option<u32> {
    let mut rows: Vec<u32> = (0..n).map(|i| bm_row(m, n, i)).collect();
    let mut inv: Vec<u32> = (0..n).map(|i| 1u32 << i).collect();
    for c in 0..n {
        let pivot = (c..n).find(|&r| rows[r] >> c & 1 == 1)?;
        rows.swap(c, pivot);
        inv.swap(c, pivot);
        for r in 0..n {
            if r != c && rows[r] >> c & 1 == 1 {
                rows[r] ^= rows[c];
                inv[r] ^= inv[c];
            }
        }
    }
    Some(inv.iter().enumerate().fold(0u32, |a, (i, &row)| a | row << (i * n)))
}

fn bm_to_endo(m: u32, g: &AbelianGroup2) -> EndoMatrix {
    let n = g.rank();
    let entries = (0..n * n).map(|b| (m >> b & 1) as u64).collect();
    EndoMatrix {
        group: g.clone(),
        entries,
    }
}

/// Generators of Aut(g): for elementary abelian groups the symmetric group
/// generators plus one transvection (these generate GL(n,2)); otherwise the
/// full enumerated automorphism list.
fn aut_generators(g: &AbelianGroup2) -> Result<Vec<EndoMatrix>, AlgebraError> {
    let n = g.rank();
    if g.is_elementary() && n >= 2 {
        let perm_cycle = |sigma: &dyn Fn(usize) -> usize| {
            let mut entries = vec![0u64; n * n];
            for j in 0..n {
                entries[sigma(j) * n + j] = 1;
            }
            EndoMatrix {
                group: g.clone(),
                entries,
            }
        };
        let cycle = perm_cycle(&|j| (j + 1) % n);
        let swap = perm_cycle(&|j| match j {
            0 => 1,
            1 => 0,
            other => other,
        });
        let mut trans = EndoMatrix::identity(g.clone());
        trans.entries[1] = 1; // I + E_{0,1}
        Ok(vec![cycle, swap, trans])
    } else {
        enumerate_automorphisms(g)
    }
}

/// One representative per orbit of Aut(g) acting on `candidates` by
/// conjugation. Representatives are the first candidates, in input order,
/// not covered by an earlier orbit.
pub fn conjugacy_class_reps(
    g: &AbelianGroup2,
    candidates: &[EndoMatrix],
) -> Result<Vec<EndoMatrix>, AlgebraError> {
    let gens = aut_generators(g)?;
    let gens: Vec<(EndoMatrix, EndoMatrix)> = gens
        .into_iter()
        .map(|a| {
            let inv = a.inverse().ok_or(AlgebraError::AutGroupTooLarge)?;
            Ok((a, inv))
        })
        .collect::<Result<_, AlgebraError>>()?;
    let mut visited: HashSet<u64> = HashSet::new();
    let mut reps = Vec::new();
    for cand in candidates {
        let key = cand.key().ok_or(AlgebraError::AutGroupTooLarge)?;
        if visited.contains(&key) {
            continue;
        }
        reps.push(cand.clone());
        // BFS over the conjugation orbit
        let mut queue = VecDeque::new();
        visited.insert(key);
        queue.push_back(cand.clone());
        while let Some(m) = queue.pop_front() {
            for (a, a_inv) in &gens {
                let conj = a.compose(&m)?.compose(a_inv)?;
                let ck = conj.key().ok_or(AlgebraError::AutGroupTooLarge)?;
                if visited.insert(ck) {
                    queue.push_back(conj);
                }
            }
        }
    }
    Ok(reps)
}

/// Conjugacy class representatives of the admissible automorphisms of `g`.
///
/// For elementary abelian groups this runs on bit-packed matrices and never
/// materializes the full admissible list, which covers `Z_2^5` (GL(5,2) has
/// just under 10^7 elements).
pub fn admissible_class_reps(g: &AbelianGroup2) -> Result<Vec<EndoMatrix>, AlgebraError> {
    let n = g.rank();
    if g.is_elementary() && n >= 2 {
        if n > 5 {
            return Err(AlgebraError::AutGroupTooLarge);
        }
        let id = bm_identity(n);
        let size = 1usize << (n * n);
        let mut visited = vec![false; size];
        let gens: Vec<(u32, u32)> = aut_generators(g)?
            .iter()
            .map(|m| {
                let bits = (0..n * n).fold(0u32, |a, b| a | ((m.entries[b] as u32 & 1) << b));
                (bits, bm_inverse(bits, n).expect("generator invertible"))
            })
            .collect();
        let mut reps = Vec::new();
        for m in 0u32..size as u32 {
            if visited[m as usize] || !bm_invertible(m, n) || !bm_invertible(m ^ id, n) {
                continue;
            }
            reps.push(bm_to_endo(m, g));
            let mut queue = VecDeque::new();
            visited[m as usize] = true;
            queue.push_back(m);
            while let Some(x) = queue.pop_front() {
                for &(a, a_inv) in &gens {
                    let c = bm_mul(bm_mul(a, x, n), a_inv, n);
                    if !visited[c as usize] {
                        visited[c as usize] = true;
                        queue.push_back(c);
                    }
                }
            }
        }
        return Ok(reps);
    }
    let admissible = admissible_automorphisms(g)?;
    conjugacy_class_reps(g, &admissible)
}

/// A matrix over Z/2^e with a single modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u8>, // row-major, reduced mod modulus
}

impl ModMatrix {
    pub fn new(modulus: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self, AlgebraError> {
        if !modulus.is_power_of_two() || modulus < 2 || modulus > 256 {
            return Err(AlgebraError::BadModulus(modulus));
        }
        if entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.iter().map(|&e| (e % modulus) as u8).collect();
        Ok(ModMatrix {
            modulus,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(modulus: u64, cols: usize, rows: Vec<Vec<u8>>) -> Result<Self, AlgebraError> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for r in &rows {
            if r.len() != cols {
                return Err(AlgebraError::DimensionMismatch("ragged row".into()));
            }
            entries.extend(r.iter().map(|&e| e as u64));
        }
        ModMatrix::new(modulus, nrows, cols, entries)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.cols + j]
    }

    /// `self * v` reduced mod the modulus.
    pub fn apply(&self, v: &[u8]) -> Result<Vec<u8>, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch(
                "vector length does not match column count".into(),
            ));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc += self.entry(i, j) as u64 * v[j] as u64;
                }
                (acc % self.modulus) as u8
            })
            .collect())
    }

    /// Text format: first line `mod 2^e rows cols`, then row-major entries.
    pub fn to_text(&self) -> String {
        let e = self.modulus.trailing_zeros();
        let mut out = format!("mod 2^{} {} {}\n", e, self.rows, self.cols);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, AlgebraError> {
        let mut tokens = text.split_whitespace();
        let tag = tokens.next().ok_or_else(|| AlgebraError::Parse("empty input".into()))?;
        if tag != "mod" {
            return Err(AlgebraError::Parse(format!("expected 'mod', got '{tag}'")));
        }
        let pow = tokens.next().ok_or_else(|| AlgebraError::Parse("missing modulus".into()))?;
        let e: u32 = pow
            .strip_prefix("2^")
            .ok_or_else(|| AlgebraError::Parse(format!("modulus '{pow}' is not of the form 2^e")))?
            .parse()
            .map_err(|_| AlgebraError::Parse(format!("bad exponent in '{pow}'")))?;
        let mut next_usize = |what: &str| -> Result<usize, AlgebraError> {
            tokens
                .next()
                .ok_or_else(|| AlgebraError::Parse(format!("missing {what}")))?
                .parse()
                .map_err(|_| AlgebraError::Parse(format!("bad {what}")))
        };
        let rows = next_usize("row count")?;
        let cols = next_usize("column count")?;
        let entries: Vec<u64> = tokens
            .map(|t| {
                t.parse()
                    .map_err(|_| AlgebraError::Parse(format!("bad entry '{t}'")))
            })
            .collect::<Result<_, _>>()?;
        ModMatrix::new(1u64 << e, rows, cols, entries)
    }
}

/// A generating set for the kernel `{v : m v = 0 mod 2^e}`.
///
/// Dispatches to bitset Gaussian elimination for e = 1 and to Howell-style
/// row reduction for e >= 2. Generators have pairwise distinct pivot
/// positions, so none lies in the span of the others.
pub fn kernel_basis(m: &ModMatrix) -> Vec<Vec<u8>> {
    if m.modulus == 2 {
        kernel_gf2(m)
    } else {
        kernel_howell(m)
    }
}

fn kernel_gf2(m: &ModMatrix) -> Vec<Vec<u8>> {
    let cols = m.cols;
    let words = cols.div_ceil(64);
    let pack = |row: &[u8]| -> Vec<u64> {
        let mut w = vec![0u64; words];
        for (j, &e) in row.iter().enumerate() {
            if e & 1 == 1 {
                w[j / 64] |= 1 << (j % 64);
            }
        }
        w
    };
    let leading = |w: &[u64]| -> Option<usize> {
        w.iter()
            .enumerate()
            .find(|(_, &x)| x != 0)
            .map(|(i, &x)| i * 64 + x.trailing_zeros() as usize)
    };
    // incremental echelon: pivots[c] = packed row with leading column c
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; cols];
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for i in 0..m.rows {
        let mut w = pack(m.row(i));
        if w.iter().all(|&x| x == 0) || !seen.insert(w.clone()) {
            continue;
        }
        while let Some(c) = leading(&w) {
            match &pivots[c] {
                Some(p) => {
                    for (a, b) in w.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    pivots[c] = Some(w);
                    break;
                }
            }
        }
    }
    // back-substitute to reduced form
    let pivot_cols: Vec<usize> = (0..cols).filter(|&c| pivots[c].is_some()).collect();
    for &c in pivot_cols.iter().rev() {
        let row = pivots[c].clone().unwrap();
        for &c2 in &pivot_cols {
            if c2 < c {
                let r2 = pivots[c2].as_mut().unwrap();
                if r2[c / 64] >> (c % 64) & 1 == 1 {
                    for (a, b) in r2.iter_mut().zip(&row) {
                        *a ^= b;
                    }
                }
            }
        }
    }
    let is_pivot: Vec<bool> = (0..cols).map(|c| pivots[c].is_some()).collect();
    let mut basis = Vec::new();
    for f in 0..cols {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![0u8; cols];
        v[f] = 1;
        for &c in &pivot_cols {
            let row = pivots[c].as_ref().unwrap();
            if row[f / 64] >> (f % 64) & 1 == 1 {
                v[c] = 1;
            }
        }
        basis.push(v);
    }
    basis
}

fn unit_inverse(u: u64, m: u64) -> u64 {
    debug_assert!(u % 2 == 1);
    // 2-adic Newton iteration
    let mut x = 1u64;
    for _ in 0..m.trailing_zeros() + 1 {
        x = x.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(x))) % m;
    }
    (x + m) % m
}

/// Canonical Howell form of the row span of `rows` over Z/m (m a 2-power).
/// Zero rows are dropped; rows are ordered by pivot column; pivots are
/// normalized to powers of two and entries above a pivot are reduced below it.
pub fn howell_form(rows: &[Vec<u8>], cols: usize, m: u64) -> Vec<Vec<u8>> {
    let e = m.trailing_zeros();
    let mut work: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as u64 % m).collect())
        .filter(|r: &Vec<u64>| r.iter().any(|&x| x != 0))
        .collect();
    let mut result: Vec<Vec<u64>> = Vec::new();
    for c in 0..cols {
        // rows in `work` have zeros before column c
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in work.iter().enumerate() {
            if r[c] != 0 {
                let v = r[c].trailing_zeros();
                if best.map_or(true, |(_, bv)| v < bv) {
                    best = Some((i, v));
                }
            }
        }
        let Some((pi, v)) = best else { continue };
        let mut pivot_row = work.swap_remove(pi);
        let unit = unit_inverse(pivot_row[c] >> v, m);
        for x in pivot_row.iter_mut() {
            *x = *x * unit % m;
        }
        debug_assert_eq!(pivot_row[c], 1 << v);
        let piv = 1u64 << v;
        let mut i = 0;
        while i < work.len() {
            if work[i][c] != 0 {
                let q = work[i][c] / piv;
                for j in c..cols {
                    work[i][j] = (work[i][j] + (m - q * pivot_row[j] % m)) % m;
                }
                if work[i].iter().all(|&x| x == 0) {
                    work.swap_remove(i);
                    continue;
                }
            }
            i += 1;
        }
        if v > 0 {
            // saturate: 2^{e-v} * pivot row stays in the span and has a later pivot
            let mult = 1u64 << (e - v);
            let extra: Vec<u64> = pivot_row.iter().map(|&x| x * mult % m).collect();
            if extra.iter().any(|&x| x != 0) {
                work.push(extra);
            }
        }
        result.push(pivot_row);
    }
    // reduce entries above each pivot
    for i in 0..result.len() {
        let (head, tail) = result.split_at_mut(i);
        let row = &tail[0];
        let c = (0..cols).find(|&j| row[j] != 0).unwrap();
        let piv = row[c];
        for r in head.iter_mut() {
            let q = r[c] / piv;
            if q != 0 {
                for j in c..cols {
                    r[j] = (r[j] + (m - q * row[j] % m)) % m;
                }
            }
        }
    }
    result
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as u8).collect())
        .collect()
}

/// Cardinality of the span of `rows` over Z/m: the product of `m / pivot`
/// over the Howell form rows.
pub fn span_cardinality(rows: &[Vec<u8>], cols: usize, m: u64) -> u128 {
    howell_form(rows, cols, m)
        .iter()
        .map(|r| {
            let c = r.iter().position(|&x| x != 0).unwrap();
            (m / r[c] as u64) as u128
        })
        .product()
}

/// Membership test against a Howell form (as produced by [`howell_form`]).
pub fn span_contains(howell: &[Vec<u8>], v: &[u8], m: u64) -> bool {
    let mut v: Vec<u64> = v.iter().map(|&x| x as u64 % m).collect();
    for row in howell {
        let c = row.iter().position(|&x| x != 0).unwrap();
        let piv = row[c] as u64;
        let q = v[c] / piv;
        if q != 0 {
            for j in 0..v.len() {
                v[j] = (v[j] + (m - q * row[j] as u64 % m)) % m;
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

fn kernel_howell(m: &ModMatrix) -> Vec<Vec<u8>> {
    let (r, s) = (m.rows, m.cols);
    // rows of [A^T | I_s]: combinations track (A v | v)
    let rows: Vec<Vec<u8>> = (0..s)
        .map(|i| {
            let mut row = vec![0u8; r + s];
            for j in 0..r {
                row[j] = m.entry(j, i);
            }
            row[r + i] = 1;
            row
        })
        .collect();
    howell_form(&rows, r + s, m.modulus)
        .into_iter()
        .filter(|row| row[..r].iter().all(|&x| x == 0))
        .map(|row| row[r..].to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z2n(n: usize) -> AbelianGroup2 {
        AbelianGroup2::elementary(n)
    }

    fn psi_order3_z22() -> EndoMatrix {
        EndoMatrix::new(z2n(2), vec![1, 1, 1, 0]).unwrap()
    }

    #[test]
    fn group_add_examples() {
        let g = z2n(2);
        let x = GroupElement::from_coords(&g, vec![1, 0]).unwrap();
        let y = GroupElement::from_coords(&g, vec![1, 1]).unwrap();
        assert_eq!(g.add(&x, &y).unwrap().coords(), &[0, 1]);

        let g4 = AbelianGroup2::new(vec![2, 2]).unwrap();
        let x = GroupElement::from_coords(&g4, vec![3, 2]).unwrap();
        let y = GroupElement::from_coords(&g4, vec![1, 2]).unwrap();
        assert_eq!(g4.add(&x, &y).unwrap().coords(), &[0, 0]);

        for x in g4.elements() {
            assert_eq!(g4.add(&x, &g4.zero()).unwrap(), x);
        }
    }

    #[test]
    fn group_add_dimension_mismatch() {
        let g = z2n(2);
        let x = g.zero();
        let y = z2n(3).zero();
        assert!(g.add(&x, &y).is_err());
    }

    #[test]
    fn endo_apply_examples() {
        let psi = psi_order3_z22();
        let g = z2n(2);
        let x = GroupElement::from_coords(&g, vec![1, 0]).unwrap();
        assert_eq!(psi.apply(&x).unwrap().coords(), &[1, 1]);
        let x = GroupElement::from_coords(&g, vec![0, 1]).unwrap();
        assert_eq!(psi.apply(&x).unwrap().coords(), &[1, 0]);

        let id = EndoMatrix::identity(g.clone());
        for x in g.elements() {
            assert_eq!(id.apply(&x).unwrap(), x);
        }
    }

    #[test]
    fn endo_matrix_rejects_non_homomorphism() {
        // Z_4 x Z_2: entry (0,1) = 1 sends the order-2 generator to an
        // element of order 4
        let g = AbelianGroup2::new(vec![2, 1]).unwrap();
        assert_eq!(
            EndoMatrix::new(g.clone(), vec![1, 1, 0, 1]),
            Err(AlgebraError::InvalidEntry(0, 1))
        );
        assert!(EndoMatrix::new(g, vec![1, 2, 0, 1]).is_ok());
    }

    #[test]
    fn bijectivity_examples() {
        let psi = psi_order3_z22();
        assert!(psi.is_bijective());
        assert!(psi.one_minus().is_bijective());

        let id = EndoMatrix::identity(z2n(3));
        assert!(!id.one_minus().is_bijective());

        // psi(x) = 3x on Z_4: 1 - psi = -2, image {0,2}
        let g = AbelianGroup2::new(vec![2]).unwrap();
        let psi = EndoMatrix::new(g, vec![3]).unwrap();
        assert!(psi.is_bijective());
        assert!(!psi.one_minus().is_bijective());
    }

    #[test]
    fn bijectivity_agrees_with_image_check() {
        // every group of order <= 64 with few enough endomorphisms
        for log in 1..=6u32 {
            for sig in signatures_of_order(log) {
                let g = AbelianGroup2::new(sig).unwrap();
                let Ok(endos) = enumerate_endomorphisms(&g) else {
                    continue; // enumeration guarded for large groups
                };
                for m in endos {
                    assert_eq!(
                        m.is_bijective(),
                        m.as_permutation().is_some(),
                        "group {:?} matrix {:?}",
                        g.signature(),
                        m.entries()
                    );
                }
            }
        }
    }

    #[test]
    fn endomorphisms_are_additive() {
        for log in 1..=6u32 {
            for sig in signatures_of_order(log) {
                let g = AbelianGroup2::new(sig).unwrap();
                let Ok(endos) = enumerate_endomorphisms(&g) else {
                    continue; // enumeration guarded for large groups
                };
                // exhaustive for small groups, strided sample above order 16
                let stride = if g.order() <= 16 { 1 } else { 97 };
                for m in endos.into_iter().step_by(stride) {
                    for x in g.elements() {
                        for y in g.elements() {
                            let lhs = m.apply(&g.add(&x, &y).unwrap()).unwrap();
                            let rhs = g
                                .add(&m.apply(&x).unwrap(), &m.apply(&y).unwrap())
                                .unwrap();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn admissible_automorphisms_examples() {
        // Z_4 x Z_2 has none (1 - a_1 is even for any automorphism image)
        let g = AbelianGroup2::new(vec![2, 1]).unwrap();
        assert!(admissible_automorphisms(&g).unwrap().is_empty());

        // Z_4 x Z_4 x Z_2 has none either
        let g = AbelianGroup2::new(vec![2, 2, 1]).unwrap();
        assert!(admissible_automorphisms(&g).unwrap().is_empty());

        // Z_2^2: exactly the two order-3 elements of GL(2,2)
        let adm = admissible_automorphisms(&z2n(2)).unwrap();
        assert_eq!(adm.len(), 2);
        for m in &adm {
            let sq = m.compose(m).unwrap();
            let cube = sq.compose(m).unwrap();
            assert_eq!(cube, EndoMatrix::identity(z2n(2)));
        }
    }

    #[test]
    fn admissibility_empty_when_top_exponent_strict() {
        // all signatures of order <= 32 with k_1 > k_2
        for log in 2..=5u32 {
            for sig in signatures_of_order(log) {
                if sig.len() >= 2 && sig[0] > sig[1] || sig.len() == 1 && sig[0] > 1 {
                    let g = AbelianGroup2::new(sig.clone()).unwrap();
                    assert!(
                        admissible_automorphisms(&g).unwrap().is_empty(),
                        "signature {sig:?} should be inadmissible"
                    );
                }
            }
        }
    }

    #[test]
    fn conjugacy_reps_z22() {
        let adm = admissible_automorphisms(&z2n(2)).unwrap();
        let reps = conjugacy_class_reps(&z2n(2), &adm).unwrap();
        assert_eq!(reps.len(), 1);
    }

    #[test]
    fn conjugacy_reps_z23() {
        let g = z2n(3);
        let adm = admissible_automorphisms(&g).unwrap();
        let reps = conjugacy_class_reps(&g, &adm).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(admissible_class_reps(&g).unwrap().len(), 2);
    }

    #[test]
    fn conjugacy_singleton() {
        let psi = psi_order3_z22();
        let reps = conjugacy_class_reps(&z2n(2), &[psi.clone()]).unwrap();
        assert_eq!(reps, vec![psi]);
    }

    #[test]
    fn every_candidate_conjugate_to_exactly_one_rep() {
        for g in [z2n(2), z2n(3), AbelianGroup2::new(vec![2, 2]).unwrap()] {
            let adm = admissible_automorphisms(&g).unwrap();
            let reps = conjugacy_class_reps(&g, &adm).unwrap();
            let autos = enumerate_automorphisms(&g).unwrap();
            for cand in &adm {
                let mut matches = 0;
                for rep in &reps {
                    // explicit conjugating element
                    let found = autos.iter().any(|a| {
                        let ainv = a.inverse().unwrap();
                        &a.compose(rep).unwrap().compose(&ainv).unwrap() == cand
                    });
                    if found {
                        matches += 1;
                    }
                }
                assert_eq!(matches, 1, "candidate {:?}", cand.entries());
            }
        }
    }

    #[test]
    fn kernel_examples() {
        // [2] over Z_4
        let m = ModMatrix::new(4, 1, 1, vec![2]).unwrap();
        let basis = kernel_basis(&m);
        assert_eq!(basis, vec![vec![2]]);

        // identity over Z_2
        let m = ModMatrix::new(2, 3, 3, vec![1, 0, 0, 0, 1, 0, 0, 0, 1]).unwrap();
        assert!(kernel_basis(&m).is_empty());
    }

    #[test]
    fn kernel_matches_brute_force_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(modulus, rows, cols) in &[(2u64, 6usize, 4usize), (4, 6, 4), (4, 3, 5), (8, 4, 3)] {
            for _ in 0..20 {
                let entries: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..modulus)).collect();
                let m = ModMatrix::new(modulus, rows, cols, entries).unwrap();
                let basis = kernel_basis(&m);
                for v in &basis {
                    assert!(m.apply(v).unwrap().iter().all(|&x| x == 0));
                }
                let brute = oracle::brute_force_kernel(&m);
                let span = span_cardinality(&basis, cols, modulus);
                assert_eq!(span, brute.len() as u128, "m = {m:?}");
            }
        }
    }

    #[test]
    fn howell_form_is_canonical_under_row_shuffle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let cols = 5;
            let mut rows: Vec<Vec<u8>> = (0..4)
                .map(|_| (0..cols).map(|_| rng.gen_range(0..4u8)).collect())
                .collect();
            let h1 = howell_form(&rows, cols, 4);
            rows.reverse();
            // also mix in a redundant combination
            if rows.len() >= 2 {
                let comb: Vec<u8> = (0..cols)
                    .map(|j| (rows[0][j] + 3 * rows[1][j]) % 4)
                    .collect();
                rows.push(comb);
            }
            let h2 = howell_form(&rows, cols, 4);
            assert_eq!(h1, h2);
        }
    }

    #[test]
    fn lifting_kernel_matches_howell() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (rows, cols) = (5usize, 4usize);
            let entries: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..4)).collect();
            let m = ModMatrix::new(4, rows, cols, entries).unwrap();
            let a = kernel_basis(&m);
            let b = oracle::lifting_kernel(&m);
            for v in &b {
                assert!(m.apply(v).unwrap().iter().all(|&x| x == 0));
            }
            assert_eq!(
                howell_form(&a, cols, 4),
                howell_form(&b, cols, 4),
                "spans differ for {m:?}"
            );
        }
    }

    #[test]
    fn matrix_text_roundtrip() {
        let m = ModMatrix::new(4, 2, 3, vec![1, 2, 3, 0, 1, 2]).unwrap();
        let text = m.to_text();
        assert!(text.starts_with("mod 2^2 2 3\n"));
        assert_eq!(ModMatrix::from_text(&text).unwrap(), m);
    }

    #[test]
    fn signatures_enumeration() {
        assert_eq!(
            signatures_of_order(3),
            vec![vec![3], vec![2, 1], vec![1, 1, 1]]
        );
    }

    proptest! {
        #[test]
        fn group_laws(sig_idx in 0usize..4, a in 0u64..64, b in 0u64..64, c in 0u64..64) {
            let sigs = [vec![1,1], vec![2,2], vec![2,1,1], vec![1,1,1,1,1,1]];
            let g = AbelianGroup2::new(sigs[sig_idx].clone()).unwrap();
            let a = g.element(a % g.order());
            let b = g.element(b % g.order());
            let c = g.element(c % g.order());
            // commutativity, associativity, inverses
            prop_assert_eq!(g.add(&a, &b).unwrap(), g.add(&b, &a).unwrap());
            prop_assert_eq!(
                g.add(&g.add(&a, &b).unwrap(), &c).unwrap(),
                g.add(&a, &g.add(&b, &c).unwrap()).unwrap()
            );
            prop_assert_eq!(g.add(&a, &g.neg(&a)).unwrap(), g.zero());
            // index round trip
            prop_assert_eq!(g.element(g.index_of(&a)), a);
        }

        #[test]
        fn kernel_vectors_are_solutions(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let modulus = [2u64, 4, 8][rng.gen_range(0..3)];
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let entries: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..modulus)).collect();
            let m = ModMatrix::new(modulus, rows, cols, entries).unwrap();
            for v in kernel_basis(&m) {
                prop_assert!(m.apply(&v).unwrap().iter().all(|&x| x == 0));
            }
        }
    }
}
