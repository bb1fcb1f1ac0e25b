//! Independent reference implementations used to cross-check the production
//! paths: exhaustive kernel enumeration, the integer-lifting kernel for
//! systems over Z/2^e, and a propagation-based enumerator of (LD) cocycle
//! solutions. Nothing here shares code with the routines it checks.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::{AbelianGroup2, EndoMatrix, ModMatrix};
use crate::quandle::MagmaTable;

/// Every solution of `m v = 0` over Z/2^e, by exhaustive enumeration of all
/// `modulus^cols` candidate vectors. The zero vector is included.
pub fn brute_force_kernel(m: &ModMatrix) -> Vec<Vec<u8>> {
    let modulus = m.modulus();
    let cols = m.cols();
    let total = (modulus as u128).pow(cols as u32);
    assert!(total <= 1 << 24, "brute-force kernel space too large");
    let mut out = Vec::new();
    let mut v = vec![0u8; cols];
    for _ in 0..total {
        if m.apply(&v).unwrap().iter().all(|&x| x == 0) {
            out.push(v.clone());
        }
        // odometer
        for digit in v.iter_mut().rev() {
            *digit += 1;
            if (*digit as u64) < modulus {
                break;
            }
            *digit = 0;
        }
    }
    out
}

/// Kernel of `m` over Z/2^e via the integer lifting route: `A v = 0 mod m`
/// iff `(A  mI) (v, x) = 0` over the integers, so a basis of the integer
/// kernel lattice of the extended matrix projects onto a generating set.
pub fn lifting_kernel(m: &ModMatrix) -> Vec<Vec<u8>> {
    let r = m.rows();
    let s = m.cols();
    let modulus = BigInt::from(m.modulus());
    let n = s + r; // columns of A+ = unknowns of the integer system
    // rows of [A+^T | I_n]; a vanishing first block exposes an integer
    // kernel vector of A+ in the identity block
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); r + n];
            for j in 0..r {
                row[j] = if i < s {
                    BigInt::from(m.entry(j, i))
                } else if j == i - s {
                    modulus.clone()
                } else {
                    BigInt::zero()
                };
            }
            row[r + i] = BigInt::from(1);
            row
        })
        .collect();

    let mut pivot_row = 0usize;
    for c in 0..r {
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..n {
                if !rows[i][c].is_zero()
                    && best.map_or(true, |b| rows[i][c].abs() < rows[b][c].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..n {
                if !rows[i][c].is_zero() {
                    let q = &rows[i][c] / &rows[pivot_row][c];
                    if !q.is_zero() {
                        for j in 0..r + n {
                            let sub = &q * &rows[pivot_row][j];
                            rows[i][j] -= sub;
                        }
                    }
                    if !rows[i][c].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                pivot_row += 1;
                break;
            }
        }
    }
    let big_m = BigInt::from(m.modulus());
    rows[pivot_row..]
        .iter()
        .map(|row| {
            debug_assert!(row[..r].iter().all(|x| x.is_zero()));
            (0..s)
                .map(|j| {
                    let residue = ((&row[r + j] % &big_m) + &big_m) % &big_m;
                    let digits = residue.to_u32_digits().1;
                    digits.first().copied().unwrap_or(0) as u8
                })
                .collect()
        })
        .filter(|v: &Vec<u8>| v.iter().any(|&x| x != 0))
        .collect()
}

/// Number of cocycles `theta: F^2 -> A` satisfying the diagonal-zero and
/// (LD) conditions, by depth-first search over the `|A|^{|F|^2}` tables with
/// unit propagation. Constraints are evaluated directly on group elements,
/// independently of the linear-system assembly.
///
/// `cap` bounds the number of solutions counted; the search panics if the
/// count would exceed it.
pub fn count_ld_cocycles(f: &MagmaTable, a: &AbelianGroup2, psi: &EndoMatrix, cap: u128) -> u128 {
    let q = f.order();
    let pairs = q * q;
    let order = a.order() as usize;
    let phi = psi.one_minus();
    // element-index tables for the fiber
    let add: Vec<Vec<u16>> = (0..order)
        .map(|x| {
            (0..order)
                .map(|y| {
                    a.index_of(&a.add(&a.element(x as u64), &a.element(y as u64)).unwrap()) as u16
                })
                .collect()
        })
        .collect();
    let neg: Vec<u16> = (0..order)
        .map(|x| a.index_of(&a.neg(&a.element(x as u64))) as u16)
        .collect();
    let psi_map: Vec<u16> = (0..order)
        .map(|x| a.index_of(&psi.apply(&a.element(x as u64)).unwrap()) as u16)
        .collect();
    let phi_map: Vec<u16> = (0..order)
        .map(|x| a.index_of(&phi.apply(&a.element(x as u64)).unwrap()) as u16)
        .collect();

    // every (LD) instance as the support list [(pair, op)] where op encodes
    // which of psi/phi/identity/negated acts on that theta value
    #[derive(Clone, Copy, PartialEq)]
    enum Op {
        Psi,
        Id,
        NegPsi,
        NegPhi,
        NegId,
    }
    let mut constraints: Vec<Vec<(usize, Op)>> = Vec::new();
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                let terms = [
                    (y * q + z, Op::Psi),
                    (x * q + f.get(y, z), Op::Id),
                    (x * q + z, Op::NegPsi),
                    (x * q + y, Op::NegPhi),
                    (f.get(x, y) * q + f.get(x, z), Op::NegId),
                ];
                constraints.push(terms.to_vec());
            }
        }
    }
    let eval = |op: Op, v: u16| -> u16 {
        match op {
            Op::Psi => psi_map[v as usize],
            Op::Id => v,
            Op::NegPsi => neg[psi_map[v as usize] as usize],
            Op::NegPhi => neg[phi_map[v as usize] as usize],
            Op::NegId => neg[v as usize],
        }
    };

    // constraints touching each pair
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); pairs];
    for (ci, c) in constraints.iter().enumerate() {
        for &(p, _) in c {
            touching[p].push(ci);
        }
    }

    let mut assign: Vec<Option<u16>> = vec![None; pairs];
    for d in 0..q {
        assign[d * q + d] = Some(a.index_of(&a.zero()) as u16);
    }

    struct Search<'s> {
        constraints: &'s [Vec<(usize, Op)>],
        touching: &'s [Vec<usize>],
        add: &'s [Vec<u16>],
        order: usize,
        cap: u128,
        count: u128,
    }
    impl Search<'_> {
        // returns false on contradiction
        fn check(&self, ci: usize, assign: &[Option<u16>], eval: &dyn Fn(Op, u16) -> u16) -> bool {
            let mut sum = 0u16; // accumulate assigned terms
            for &(p, op) in &self.constraints[ci] {
                match assign[p] {
                    Some(v) => sum = self.add[sum as usize][eval(op, v) as usize],
                    None => return true, // not fully assigned yet
                }
            }
            sum as usize == 0
        }

        fn dfs(&mut self, assign: &mut Vec<Option<u16>>, eval: &dyn Fn(Op, u16) -> u16) {
            // prefer a pair sitting in a constraint whose other pairs are all
            // assigned, so each branch is validated immediately
            let mut choice: Option<usize> = None;
            'outer: for c in self.constraints {
                let mut open = None;
                for &(p, _) in c {
                    if assign[p].is_none() {
                        if open.is_some_and(|o| o != p) {
                            continue 'outer;
                        }
                        open = Some(p);
                    }
                }
                if let Some(p) = open {
                    choice = Some(p);
                    break;
                }
            }
            let p = match choice.or_else(|| (0..assign.len()).find(|&p| assign[p].is_none())) {
                Some(p) => p,
                None => {
                    self.count += 1;
                    assert!(self.count <= self.cap, "LD cocycle count exceeds cap");
                    return;
                }
            };
            for v in 0..self.order as u16 {
                assign[p] = Some(v);
                if self.touching[p]
                    .iter()
                    .all(|&ci| self.check(ci, assign, eval))
                {
                    self.dfs(assign, eval);
                }
            }
            assign[p] = None;
        }
    }

    let mut search = Search {
        constraints: &constraints,
        touching: &touching,
        add: &add,
        order,
        cap,
        count: 0,
    };
    // check constraints fully determined by the forced diagonal
    let diag_ok = (0..constraints.len()).all(|ci| search.check(ci, &assign, &eval));
    if !diag_ok {
        return 0;
    }
    let mut assign = assign;
    search.dfs(&mut assign, &eval);
    search.count
}
