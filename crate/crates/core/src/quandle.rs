//! Finite binary-operation tables with the quandle/latin/medial predicate
//! suite, affine quandle construction, direct products, and a backtracking
//! isomorphism test pruned by left-translation cycle types.

use std::collections::HashMap;
use thiserror::Error;

use crate::algebra::{AbelianGroup2, EndoMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuandleError {
    #[error("table entry {0} out of range for order {1}")]
    EntryOutOfRange(usize, usize),
    #[error("table shape invalid: expected {0} entries, got {1}")]
    BadShape(usize, usize),
    #[error("automorphism is not admissible (psi or 1 - psi not bijective)")]
    NotAdmissible,
    #[error("parse error: {0}")]
    Parse(String),
}

/// An order-n binary operation table; `table[a * n + b] = a * b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MagmaTable {
    order: usize,
    table: Vec<u16>,
}

/// A quadruple `(a,b,c,d)` with `(a*b)*(c*d) != (a*c)*(b*d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MedialityWitness {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl MagmaTable {
    pub fn new(order: usize, table: Vec<u16>) -> Result<Self, QuandleError> {
        if table.len() != order * order {
            return Err(QuandleError::BadShape(order * order, table.len()));
        }
        if let Some(&e) = table.iter().find(|&&e| e as usize >= order) {
            return Err(QuandleError::EntryOutOfRange(e as usize, order));
        }
        Ok(MagmaTable { order, table })
    }

    pub fn trivial() -> Self {
        MagmaTable {
            order: 1,
            table: vec![0],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    /// Every row and every column is a permutation.
    pub fn is_latin(&self) -> bool {
        let n = self.order;
        let mut seen = vec![false; n];
        for a in 0..n {
            seen.fill(false);
            for b in 0..n {
                let v = self.get(a, b);
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        for b in 0..n {
            seen.fill(false);
            for a in 0..n {
                let v = self.get(a, b);
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.order).all(|a| self.get(a, a) == a)
    }

    /// `x*(y*z) = (x*y)*(x*z)` on all triples.
    pub fn is_left_distributive(&self) -> bool {
        let n = self.order;
        for x in 0..n {
            for y in 0..n {
                let xy = self.get(x, y);
                for z in 0..n {
                    if self.get(x, self.get(y, z)) != self.get(xy, self.get(x, z)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Idempotent, left-distributive, and all left translations bijective.
    pub fn is_quandle(&self) -> bool {
        let n = self.order;
        let left_translations_bijective = (0..n).all(|a| {
            let mut seen = vec![false; n];
            (0..n).all(|b| {
                let v = self.get(a, b);
                !std::mem::replace(&mut seen[v], true)
            })
        });
        self.is_idempotent() && self.is_left_distributive() && left_translations_bijective
    }

    /// First violation of `(x*y)*(u*v) = (x*u)*(y*v)` in lexicographic order,
    /// or `None` when the table is medial. For latin quandles this decides
    /// affineness.
    pub fn medial_witness(&self) -> Option<MedialityWitness> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.get(a, b);
                for c in 0..n {
                    let ac = self.get(a, c);
                    for d in 0..n {
                        if self.get(ab, self.get(c, d)) != self.get(ac, self.get(b, d)) {
                            return Some(MedialityWitness { a, b, c, d });
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_medial(&self) -> bool {
        self.medial_witness().is_none()
    }

    /// Mediality check that probes the given quadruples first and falls back
    /// to the full lexicographic scan. Useful when the construction predicts
    /// where a violation lies.
    pub fn medial_witness_seeded(
        &self,
        seeds: &[(usize, usize, usize, usize)],
    ) -> Option<MedialityWitness> {
        for &(a, b, c, d) in seeds {
            if a < self.order && b < self.order && c < self.order && d < self.order {
                let lhs = self.get(self.get(a, b), self.get(c, d));
                let rhs = self.get(self.get(a, c), self.get(b, d));
                if lhs != rhs {
                    return Some(MedialityWitness { a, b, c, d });
                }
            }
        }
        self.medial_witness()
    }

    /// Re-evaluate a witness against this table.
    pub fn witness_holds(&self, w: &MedialityWitness) -> bool {
        self.get(self.get(w.a, w.b), self.get(w.c, w.d))
            != self.get(self.get(w.a, w.c), self.get(w.b, w.d))
    }

    /// Cycle type of the left translation `b -> a*b`, sorted ascending.
    pub fn left_translation_cycle_type(&self, a: usize) -> Vec<usize> {
        let n = self.order;
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.get(a, x);
                len += 1;
            }
            cycles.push(len);
        }
        cycles.sort_unstable();
        cycles
    }

    /// Isomorphism-invariant fingerprint: the multiset of left-translation
    /// cycle types over all elements.
    pub fn fingerprint(&self) -> String {
        let mut types: Vec<Vec<usize>> = (0..self.order)
            .map(|a| self.left_translation_cycle_type(a))
            .collect();
        types.sort();
        let parts: Vec<String> = types
            .iter()
            .map(|t| {
                let inner: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                inner.join(".")
            })
            .collect();
        parts.join("|")
    }

    /// Text format: line 1 `n`, then n rows of n integers.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for a in 0..self.order {
            let row: Vec<String> = (0..self.order).map(|b| self.get(a, b).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, QuandleError> {
        let mut tokens = text.split_whitespace();
        let order: usize = tokens
            .next()
            .ok_or_else(|| QuandleError::Parse("empty input".into()))?
            .parse()
            .map_err(|_| QuandleError::Parse("bad order".into()))?;
        let table: Vec<u16> = tokens
            .map(|t| {
                t.parse()
                    .map_err(|_| QuandleError::Parse(format!("bad entry '{t}'")))
            })
            .collect::<Result<_, _>>()?;
        MagmaTable::new(order, table)
    }
}

/// The affine quandle `x*y = (1-psi)(x) + psi(y)` over `g`, with elements
/// indexed in lexicographic coordinate order.
pub fn affine_quandle(g: &AbelianGroup2, psi: &EndoMatrix) -> Result<MagmaTable, QuandleError> {
    if !psi.is_admissible() {
        return Err(QuandleError::NotAdmissible);
    }
    let n = g.order() as usize;
    let phi = psi.one_minus();
    let psi_perm: Vec<usize> = (0..n)
        .map(|i| g.index_of(&psi.apply(&g.element(i as u64)).unwrap()) as usize)
        .collect();
    let phi_perm: Vec<usize> = (0..n)
        .map(|i| g.index_of(&phi.apply(&g.element(i as u64)).unwrap()) as usize)
        .collect();
    let mut table = vec![0u16; n * n];
    for x in 0..n {
        for y in 0..n {
            let sum = g
                .add(
                    &g.element(phi_perm[x] as u64),
                    &g.element(psi_perm[y] as u64),
                )
                .unwrap();
            table[x * n + y] = g.index_of(&sum) as u16;
        }
    }
    Ok(MagmaTable { order: n, table })
}

/// Componentwise operation on the index product, row-major pairing:
/// `(a1,b1)*(a2,b2) = (a1*a2, b1*b2)` with `(a,b) -> a*|q| + b`.
pub fn direct_product(p: &MagmaTable, q: &MagmaTable) -> MagmaTable {
    let (np, nq) = (p.order, q.order);
    let n = np * nq;
    let mut table = vec![0u16; n * n];
    for a1 in 0..np {
        for b1 in 0..nq {
            let x = a1 * nq + b1;
            for a2 in 0..np {
                for b2 in 0..nq {
                    let y = a2 * nq + b2;
                    table[x * n + y] = (p.get(a1, a2) * nq + q.get(b1, b2)) as u16;
                }
            }
        }
    }
    MagmaTable { order: n, table }
}

/// Check that `f` is a homomorphism `p -> q` on all pairs.
pub fn is_homomorphism(f: &[usize], p: &MagmaTable, q: &MagmaTable) -> bool {
    if f.len() != p.order {
        return false;
    }
    for x in 0..p.order {
        for y in 0..p.order {
            if f[p.get(x, y)] != q.get(f[x], f[y]) {
                return false;
            }
        }
    }
    true
}

/// An explicit isomorphism `p -> q`, or `None`.
///
/// Backtracking over images, pruned per element by the left-translation
/// cycle type, with closure propagation: once `f(x)` and `f(y)` are chosen,
/// `f(x*y)` is forced.
pub fn is_isomorphic(p: &MagmaTable, q: &MagmaTable) -> Option<Vec<usize>> {
    if p.order != q.order {
        return None;
    }
    let n = p.order;
    if n == 0 {
        return Some(vec![]);
    }
    let inv_p: Vec<Vec<usize>> = (0..n).map(|a| p.left_translation_cycle_type(a)).collect();
    let inv_q: Vec<Vec<usize>> = (0..n).map(|a| q.left_translation_cycle_type(a)).collect();
    {
        let mut sp = inv_p.clone();
        let mut sq = inv_q.clone();
        sp.sort();
        sq.sort();
        if sp != sq {
            return None;
        }
    }
    // candidate images grouped by invariant
    let mut by_inv: HashMap<&Vec<usize>, Vec<usize>> = HashMap::new();
    for (b, inv) in inv_q.iter().enumerate() {
        by_inv.entry(inv).or_default().push(b);
    }

    struct State<'s> {
        p: &'s MagmaTable,
        q: &'s MagmaTable,
        inv_p: &'s [Vec<usize>],
        inv_q: &'s [Vec<usize>],
        map: Vec<Option<usize>>,
        used: Vec<bool>,
    }

    impl State<'_> {
        /// Assign f(x) = y and propagate closure; records all assignments in
        /// `trail` for undo. Returns false on contradiction.
        fn assign(&mut self, x: usize, y: usize, trail: &mut Vec<usize>) -> bool {
            match self.map[x] {
                Some(prev) => return prev == y,
                None => {}
            }
            if self.used[y] || self.inv_p[x] != self.inv_q[y] {
                return false;
            }
            self.map[x] = Some(y);
            self.used[y] = true;
            trail.push(x);
            // close under products with all currently mapped elements
            let n = self.p.order();
            for z in 0..n {
                if let Some(fz) = self.map[z] {
                    let pairs = [
                        (self.p.get(x, z), self.q.get(y, fz)),
                        (self.p.get(z, x), self.q.get(fz, y)),
                    ];
                    for (src, dst) in pairs {
                        match self.map[src] {
                            Some(cur) => {
                                if cur != dst {
                                    return false;
                                }
                            }
                            None => {
                                if !self.assign(src, dst, trail) {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
            true
        }

        fn undo(&mut self, trail: &[usize], from: usize) {
            for &x in &trail[from..] {
                let y = self.map[x].take().unwrap();
                self.used[y] = false;
            }
        }

        fn search(&mut self, by_inv: &HashMap<&Vec<usize>, Vec<usize>>) -> bool {
            let n = self.p.order();
            let x = match (0..n).find(|&x| self.map[x].is_none()) {
                Some(x) => x,
                None => return true,
            };
            let candidates = by_inv.get(&self.inv_p[x]).cloned().unwrap_or_default();
            for y in candidates {
                if self.used[y] {
                    continue;
                }
                let mut trail = Vec::new();
                if self.assign(x, y, &mut trail) && self.search(by_inv) {
                    return true;
                }
                self.undo(&trail, 0);
            }
            false
        }
    }

    let mut state = State {
        p,
        q,
        inv_p: &inv_p,
        inv_q: &inv_q,
        map: vec![None; n],
        used: vec![false; n],
    };
    if state.search(&by_inv) {
        let f: Vec<usize> = state.map.iter().map(|m| m.unwrap()).collect();
        debug_assert!(is_homomorphism(&f, p, q));
        Some(f)
    } else {
        None
    }
}
