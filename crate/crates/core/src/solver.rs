//! Assembly and solution of the linear system defining `Z_LD(F,A,psi)`:
//! one unknown fiber coordinate per ordered pair of base elements, rows from
//! the diagonal-zero condition and from (LD) instantiated at every triple.

use thiserror::Error;

use crate::algebra::{kernel_basis, AbelianGroup2, EndoMatrix, GroupElement, ModMatrix};
use crate::extensions::{check_ld, check_m, Cocycle, ExtensionSpec};
use crate::quandle::MagmaTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("base table is not a latin quandle")]
    BaseNotLatin,
    #[error("psi is not admissible for the fiber")]
    NotAdmissible,
    #[error("fiber {0:?} is not homocyclic; single-modulus systems only")]
    FiberNotHomocyclic(Vec<u32>),
    #[error("system too large: {0} unknowns")]
    TooLarge(usize),
}

/// The assembled linear system over `Z/2^e` whose kernel is `Z_LD(F,A,psi)`.
#[derive(Debug, Clone)]
pub struct LdSystem {
    base: MagmaTable,
    fiber: AbelianGroup2,
    psi: EndoMatrix,
    matrix: ModMatrix,
}

impl LdSystem {
    pub fn base(&self) -> &MagmaTable {
        &self.base
    }

    pub fn fiber(&self) -> &AbelianGroup2 {
        &self.fiber
    }

    pub fn psi(&self) -> &EndoMatrix {
        &self.psi
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.matrix
    }

    pub fn unknowns(&self) -> usize {
        self.matrix.cols()
    }
}

/// Build the system: unknowns indexed `(a*|F| + b)*n + coord`, diagonal
/// rows first (in base order, coordinate-major), then the (LD) rows for
/// every triple `(a,b,c)` in lexicographic order.
pub fn assemble(f: &MagmaTable, a: &AbelianGroup2, psi: &EndoMatrix) -> Result<LdSystem, SolverError> {
    if !(f.is_quandle() && f.is_latin()) {
        return Err(SolverError::BaseNotLatin);
    }
    if psi.group() != a || !psi.is_admissible() {
        return Err(SolverError::NotAdmissible);
    }
    if !a.is_homocyclic() {
        return Err(SolverError::FiberNotHomocyclic(a.signature().to_vec()));
    }
    let n = a.rank();
    let m = a.moduli().first().copied().unwrap_or(2);
    let q = f.order();
    let cols = q * q * n;
    if cols > 1 << 14 {
        return Err(SolverError::TooLarge(cols));
    }
    let phi = psi.one_minus();
    let neg = |x: u64| -> u8 { ((m - x % m) % m) as u8 };
    let pos = |x: u64| -> u8 { (x % m) as u8 };
    let mut rows: Vec<Vec<u8>> = Vec::with_capacity(n * (q * q * q + q));
    // theta_{a,a} = 0, one row per coordinate
    for x in 0..q {
        for i in 0..n {
            let mut row = vec![0u8; cols];
            row[(x * q + x) * n + i] = 1;
            rows.push(row);
        }
    }
    // (LD) at (x,y,z):
    //   psi(th_{y,z}) + th_{x,y*z} - psi(th_{x,z}) - phi(th_{x,y})
    //   - th_{x*y,x*z} = 0
    for x in 0..q {
        for y in 0..q {
            let xy = f.get(x, y);
            for z in 0..q {
                let yz = f.get(y, z);
                let xz = f.get(x, z);
                for i in 0..n {
                    let mut row = vec![0u8; cols];
                    let mut acc = |pair: usize, j: usize, v: u8| {
                        let idx = pair * n + j;
                        row[idx] = ((row[idx] as u64 + v as u64) % m) as u8;
                    };
                    for j in 0..n {
                        acc(y * q + z, j, pos(psi.entry(i, j)));
                        acc(x * q + z, j, neg(psi.entry(i, j)));
                        acc(x * q + y, j, neg(phi.entry(i, j)));
                    }
                    acc(x * q + yz, i, 1);
                    acc(xy * q + xz, i, neg(1));
                    rows.push(row);
                }
            }
        }
    }
    let matrix = ModMatrix::from_rows(m, cols, rows).expect("valid system shape");
    Ok(LdSystem {
        base: f.clone(),
        fiber: a.clone(),
        psi: psi.clone(),
        matrix,
    })
}

fn vector_to_cocycle(s: &LdSystem, v: &[u8]) -> Cocycle {
    let n = s.fiber.rank();
    let q = s.base.order();
    let values: Vec<u16> = (0..q * q)
        .map(|p| {
            let coords: Vec<u64> = (0..n).map(|j| v[p * n + j] as u64).collect();
            let el = GroupElement::from_coords(&s.fiber, coords).expect("reduced coords");
            s.fiber.index_of(&el) as u16
        })
        .collect();
    Cocycle::new(s.base.clone(), s.fiber.clone(), values).expect("values in range")
}

/// A generating set of `Z_LD(F,A,psi)`: the kernel basis of the assembled
/// matrix, reshaped into cocycles. Every generator passes `check_ld`.
pub fn solve_zld(s: &LdSystem) -> Vec<Cocycle> {
    let gens: Vec<Cocycle> = kernel_basis(&s.matrix)
        .iter()
        .map(|v| vector_to_cocycle(s, v))
        .collect();
    debug_assert!(gens.iter().all(|g| {
        let spec = ExtensionSpec::new(g.clone(), s.psi.clone()).unwrap();
        check_ld(&spec).unwrap().is_ok()
    }));
    gens
}

/// Number of cocycles in the span of the generating set.
pub fn span_count(s: &LdSystem, gens: &[Cocycle]) -> u128 {
    let n = s.fiber.rank();
    let q = s.base.order();
    let m = s.fiber.moduli().first().copied().unwrap_or(2);
    let rows: Vec<Vec<u8>> = gens
        .iter()
        .map(|g| {
            (0..q * q)
                .flat_map(|p| {
                    let el = s.fiber.element(g.values()[p] as u64);
                    el.coords().iter().map(|&c| c as u8).collect::<Vec<u8>>()
                })
                .collect()
        })
        .collect();
    crate::algebra::span_cardinality(&rows, q * q * n, m)
}

/// The first generator failing the mediality condition (M), or `None` if
/// all pass. Sound for deciding mediality of the whole span because the
/// (M)-satisfying cocycles form a subgroup of `Z_LD`.
pub fn nonmedial_generator(s: &LdSystem, gens: &[Cocycle]) -> Option<Cocycle> {
    gens.iter()
        .find(|g| {
            let spec = ExtensionSpec::new((*g).clone(), s.psi.clone()).expect("admissible");
            check_m(&spec).expect("well-formed").is_err()
        })
        .cloned()
}
