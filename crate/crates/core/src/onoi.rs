//! Onoi rings: characteristic-2 (not necessarily associative) rings with an
//! automorphism alpha satisfying `alpha^2 + alpha + 1 = 0` and
//! `alpha(a)b = a alpha(b)`, together with trilinear Onoi mappings and the
//! constructions built from them (direct powers, twisted matrix rings, the
//! associated affine quandle).

use thiserror::Error;

use crate::algebra::{AbelianGroup2, EndoMatrix};
use crate::quandle::MagmaTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OnoiError {
    #[error("dimension {0} too large for this operation")]
    DimensionTooLarge(usize),
    #[error("no automorphism with alpha^2 + alpha + 1 = 0 exists in dimension {0}")]
    NoValidAlpha(usize),
    #[error("{0} is not a permutation of {1} elements")]
    BadPermutation(usize, usize),
    #[error("structural error: {0}")]
    Structure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// First failing ring axiom, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingViolation {
    AlphaNotBijective,
    AlphaNotAdditive { a: u16, b: u16 },
    NotLeftDistributive { a: u16, b: u16, c: u16 },
    NotRightDistributive { a: u16, b: u16, c: u16 },
    AlphaNotMultiplicative { a: u16, b: u16 },
    AlphaCubeRoot { a: u16 },
    AlphaCompat { a: u16, b: u16 },
    AlphaFixedPoint { a: u16 },
    OrderNotOneModThree,
}

/// First failing Onoi mapping condition, with a witness triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MappingViolation {
    NotTrilinear { slot: usize, x: u16, y: u16, z: u16 },
    Om1 { a: u16, b: u16, c: u16 },
    Om2 { a: u16, b: u16, c: u16 },
    Om3 { a: u16, b: u16, c: u16 },
}

/// Which of the mediality identities fails, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MuViolation {
    Mu1 { a: u16, b: u16 },
    Mu2 { a: u16, b: u16, c: u16 },
}

/// An Onoi ring on the additive group `Z_2^dim`. Elements are bitmasks
/// `0..2^dim`; addition is XOR. The multiplication is stored as a full
/// value table and `alpha` as an element permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnoiRing {
    dim: usize,
    mul: Vec<u16>,   // size 2^dim * 2^dim, row-major
    alpha: Vec<u16>, // size 2^dim
}

impl OnoiRing {
    pub fn new(dim: usize, mul: Vec<u16>, alpha: Vec<u16>) -> Result<Self, OnoiError> {
        if dim > 8 {
            return Err(OnoiError::DimensionTooLarge(dim));
        }
        let size = 1usize << dim;
        if mul.len() != size * size {
            return Err(OnoiError::Structure(format!(
                "multiplication table has {} entries, expected {}",
                mul.len(),
                size * size
            )));
        }
        if alpha.len() != size {
            return Err(OnoiError::BadPermutation(alpha.len(), size));
        }
        if mul.iter().any(|&v| v as usize >= size) || alpha.iter().any(|&v| v as usize >= size) {
            return Err(OnoiError::Structure("table value out of range".into()));
        }
        Ok(OnoiRing { dim, mul, alpha })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        1 << self.dim
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[(a as usize) << self.dim | b as usize]
    }

    #[inline]
    pub fn alpha(&self, a: u16) -> u16 {
        self.alpha[a as usize]
    }

    #[inline]
    pub fn alpha2(&self, a: u16) -> u16 {
        self.alpha[self.alpha[a as usize] as usize]
    }

    /// The additive group as an [`AbelianGroup2`]; element index = bitmask
    /// value (coordinate 0 is the most significant bit).
    pub fn additive_group(&self) -> AbelianGroup2 {
        AbelianGroup2::elementary(self.dim)
    }

    /// Matrix of alpha over `Z_2^dim` in the group's coordinate convention.
    pub fn alpha_matrix(&self) -> Result<EndoMatrix, OnoiError> {
        let n = self.dim;
        let g = self.additive_group();
        if n == 0 {
            return Ok(EndoMatrix::identity(g));
        }
        let mut entries = vec![0u64; n * n];
        for j in 0..n {
            let basis = 1u16 << (n - 1 - j);
            let image = self.alpha(basis);
            for i in 0..n {
                entries[i * n + j] = (image >> (n - 1 - i) & 1) as u64;
            }
        }
        EndoMatrix::new(g, entries).map_err(|e| OnoiError::Structure(e.to_string()))
    }

    /// Check all Onoi ring axioms exhaustively, reporting the first failure.
    pub fn validate(&self) -> Result<(), RingViolation> {
        let size = self.size() as u16;
        // alpha additive and bijective
        let mut seen = vec![false; size as usize];
        for a in 0..size {
            let img = self.alpha(a) as usize;
            if std::mem::replace(&mut seen[img], true) {
                return Err(RingViolation::AlphaNotBijective);
            }
        }
        for a in 0..size {
            for b in 0..size {
                if self.alpha(a ^ b) != self.alpha(a) ^ self.alpha(b) {
                    return Err(RingViolation::AlphaNotAdditive { a, b });
                }
            }
        }
        // two-sided distributivity of the multiplication
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if self.mul(a, b ^ c) != self.mul(a, b) ^ self.mul(a, c) {
                        return Err(RingViolation::NotLeftDistributive { a, b, c });
                    }
                    if self.mul(a ^ b, c) != self.mul(a, c) ^ self.mul(b, c) {
                        return Err(RingViolation::NotRightDistributive { a, b, c });
                    }
                }
            }
        }
        // alpha is a ring automorphism
        for a in 0..size {
            for b in 0..size {
                if self.alpha(self.mul(a, b)) != self.mul(self.alpha(a), self.alpha(b)) {
                    return Err(RingViolation::AlphaNotMultiplicative { a, b });
                }
            }
        }
        // alpha^2 + alpha + 1 = 0
        for a in 0..size {
            if self.alpha2(a) ^ self.alpha(a) ^ a != 0 {
                return Err(RingViolation::AlphaCubeRoot { a });
            }
        }
        // alpha(a) b = a alpha(b)
        for a in 0..size {
            for b in 0..size {
                if self.mul(self.alpha(a), b) != self.mul(a, self.alpha(b)) {
                    return Err(RingViolation::AlphaCompat { a, b });
                }
            }
        }
        // 0 is the only fixed point
        for a in 1..size {
            if self.alpha(a) == a {
                return Err(RingViolation::AlphaFixedPoint { a });
            }
        }
        if self.size() > 1 && (self.size() - 1) % 3 != 0 {
            return Err(RingViolation::OrderNotOneModThree);
        }
        Ok(())
    }

    /// First element `e` with `e(ee) != 0` in index order, or `None`.
    pub fn find_cube_nonzero(&self) -> Option<u16> {
        (0..self.size() as u16).find(|&e| self.mul(e, self.mul(e, e)) != 0)
    }

    /// Text format: `dim n`, the alpha matrix over Z_2, then the
    /// `2^n x 2^n` multiplication table.
    pub fn to_text(&self) -> String {
        let n = self.dim;
        let mut out = format!("dim {}\n", n);
        let alpha_m = self.alpha_matrix().expect("alpha linear");
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| alpha_m.entry(i, j).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        let size = self.size();
        for a in 0..size {
            let row: Vec<String> = (0..size)
                .map(|b| self.mul(a as u16, b as u16).to_string())
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, OnoiError> {
        let mut tokens = text.split_whitespace();
        match tokens.next() {
            Some("dim") => {}
            other => return Err(OnoiError::Parse(format!("expected 'dim', got {other:?}"))),
        }
        let dim: usize = tokens
            .next()
            .ok_or_else(|| OnoiError::Parse("missing dimension".into()))?
            .parse()
            .map_err(|_| OnoiError::Parse("bad dimension".into()))?;
        if dim > 8 {
            return Err(OnoiError::DimensionTooLarge(dim));
        }
        let mut next_u16 = |what: &str| -> Result<u16, OnoiError> {
            tokens
                .next()
                .ok_or_else(|| OnoiError::Parse(format!("missing {what}")))?
                .parse()
                .map_err(|_| OnoiError::Parse(format!("bad {what}")))
        };
        // alpha matrix -> element permutation
        let mut matrix = vec![0u16; dim * dim];
        for e in matrix.iter_mut() {
            *e = next_u16("alpha matrix entry")?;
        }
        let size = 1usize << dim;
        let mut alpha = vec![0u16; size];
        for (v, slot) in alpha.iter_mut().enumerate() {
            let mut img = 0u16;
            for i in 0..dim {
                let mut bit = 0u16;
                for j in 0..dim {
                    bit ^= matrix[i * dim + j] & (v >> (dim - 1 - j)) as u16 & 1;
                }
                img |= bit << (dim - 1 - i);
            }
            *slot = img;
        }
        let mut mul = vec![0u16; size * size];
        for e in mul.iter_mut() {
            *e = next_u16("multiplication entry")?;
        }
        OnoiRing::new(dim, mul, alpha)
    }
}

/// A fixed-point-free automorphism with `alpha^2 + alpha + 1 = 0`:
/// companion blocks of `x^2 + x + 1` on consecutive bit pairs. Exists only
/// in even dimension.
pub fn canonical_alpha(dim: usize) -> Result<Vec<u16>, OnoiError> {
    if dim % 2 != 0 {
        return Err(OnoiError::NoValidAlpha(dim));
    }
    let size = 1usize << dim;
    let image_of_bit = |t: usize| -> u16 {
        // alpha(b_{2i}) = b_{2i+1}, alpha(b_{2i+1}) = b_{2i} + b_{2i+1}
        if t % 2 == 0 {
            1 << (t + 1)
        } else {
            (1 << (t - 1)) | (1 << t)
        }
    };
    Ok((0..size)
        .map(|v| {
            let mut img = 0u16;
            for t in 0..dim {
                if v >> t & 1 == 1 {
                    img ^= image_of_bit(t);
                }
            }
            img
        })
        .collect())
}

/// The zero Onoi ring: `ab = 0` with the canonical alpha.
pub fn zero_ring(dim: usize) -> Result<OnoiRing, OnoiError> {
    let alpha = canonical_alpha(dim)?;
    let size = 1usize << dim;
    OnoiRing::new(dim, vec![0; size * size], alpha)
}

/// The four Onoi rings on four elements: the zero ring and the three
/// nonzero multiplications on `{0,1,2,3}` with `alpha = (1 2 3)`.
pub fn four_element_rings() -> [OnoiRing; 4] {
    let alpha = vec![0u16, 2, 3, 1];
    let make = |rows: [[u16; 4]; 4]| {
        let mul: Vec<u16> = rows.iter().flatten().copied().collect();
        OnoiRing::new(2, mul, alpha.clone()).unwrap()
    };
    [
        make([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]),
        make([[0, 0, 0, 0], [0, 1, 3, 2], [0, 3, 2, 1], [0, 2, 1, 3]]),
        make([[0, 0, 0, 0], [0, 3, 2, 1], [0, 2, 1, 3], [0, 1, 3, 2]]),
        make([[0, 0, 0, 0], [0, 2, 1, 3], [0, 1, 3, 2], [0, 3, 2, 1]]),
    ]
}

/// Isomorphism of Onoi rings: an additive bijection carrying one
/// multiplication to the other. With `require_alpha` the bijection must
/// also commute with the alphas.
pub fn rings_isomorphic(o1: &OnoiRing, o2: &OnoiRing, require_alpha: bool) -> bool {
    if o1.dim != o2.dim {
        return false;
    }
    let n = o1.dim;
    if n > 3 {
        // GL(n,2) enumeration below is exhaustive; larger sizes not needed
        return o1 == o2;
    }
    let size = 1usize << n;
    // iterate all linear bijections of Z_2^n via images of the basis
    let mut images = vec![0u16; n];
    fn rec(
        t: usize,
        images: &mut Vec<u16>,
        n: usize,
        size: usize,
        o1: &OnoiRing,
        o2: &OnoiRing,
        require_alpha: bool,
    ) -> bool {
        if t == n {
            let f: Vec<u16> = (0..size)
                .map(|v| {
                    let mut img = 0u16;
                    for b in 0..n {
                        if v >> b & 1 == 1 {
                            img ^= images[b];
                        }
                    }
                    img
                })
                .collect();
            // bijective?
            let mut seen = vec![false; size];
            if f.iter().any(|&x| std::mem::replace(&mut seen[x as usize], true)) {
                return false;
            }
            let mul_ok = (0..size as u16).all(|a| {
                (0..size as u16)
                    .all(|b| f[o1.mul(a, b) as usize] == o2.mul(f[a as usize], f[b as usize]))
            });
            let alpha_ok = !require_alpha
                || (0..size as u16).all(|a| f[o1.alpha(a) as usize] == o2.alpha(f[a as usize]));
            return mul_ok && alpha_ok;
        }
        for img in 1..size as u16 {
            images[t] = img;
            if rec(t + 1, images, n, size, o1, o2, require_alpha) {
                return true;
            }
        }
        false
    }
    rec(0, &mut images, n, size, o1, o2, require_alpha)
}

/// All Onoi rings of the given dimension up to isomorphism (isomorphisms
/// commuting with alpha), for `dim <= 2`. The multiplication is enumerated
/// over basis products with the canonical alpha fixed.
pub fn classify_onoi_rings(dim: usize) -> Result<Vec<OnoiRing>, OnoiError> {
    if dim > 2 {
        return Err(OnoiError::DimensionTooLarge(dim));
    }
    if dim == 0 {
        return Ok(vec![OnoiRing::new(0, vec![0], vec![0]).unwrap()]);
    }
    if dim == 1 {
        // Z_2 admits no alpha with alpha^2 + alpha + 1 = 0 and no fixed
        // points; consistent with 3 | (|O| - 1) failing for |O| = 2
        return Ok(vec![]);
    }
    let alpha = canonical_alpha(2)?;
    let size = 4usize;
    let mut found: Vec<OnoiRing> = Vec::new();
    // basis products (b0*b0, b0*b1, b1*b0, b1*b1), extended bilinearly
    for code in 0..size.pow(4) {
        let p = [
            (code % 4) as u16,
            (code / 4 % 4) as u16,
            (code / 16 % 4) as u16,
            (code / 64 % 4) as u16,
        ];
        let basis_mul = |a_bit: usize, b_bit: usize| p[a_bit * 2 + b_bit];
        let mut mul = vec![0u16; size * size];
        for a in 0..size {
            for b in 0..size {
                let mut acc = 0u16;
                for i in 0..2 {
                    for j in 0..2 {
                        if a >> i & 1 == 1 && b >> j & 1 == 1 {
                            acc ^= basis_mul(i, j);
                        }
                    }
                }
                mul[a * size + b] = acc;
            }
        }
        let ring = OnoiRing::new(2, mul, alpha.clone())?;
        if ring.validate().is_ok() && !found.iter().any(|r| rings_isomorphic(r, &ring, true)) {
            found.push(ring);
        }
    }
    Ok(found)
}

/// The direct power `O^sigma`: componentwise addition and alpha, with the
/// twisted multiplication `(a . b)_i = a_{sigma(i)} * b_i`. Component 0 of
/// a tuple occupies the most significant bits.
pub fn power_sigma(o: &OnoiRing, k: usize, sigma: &[usize]) -> Result<OnoiRing, OnoiError> {
    if sigma.len() != k {
        return Err(OnoiError::BadPermutation(sigma.len(), k));
    }
    let mut seen = vec![false; k];
    for &s in sigma {
        if s >= k || std::mem::replace(&mut seen[s], true) {
            return Err(OnoiError::BadPermutation(sigma.len(), k));
        }
    }
    let d = o.dim;
    let dim = k * d;
    if dim > 8 {
        return Err(OnoiError::DimensionTooLarge(dim));
    }
    let size = 1usize << dim;
    let mask = (1u16 << d) - 1;
    let comp = |v: usize, t: usize| -> u16 { (v >> (d * (k - 1 - t))) as u16 & mask };
    let mut mul = vec![0u16; size * size];
    let mut alpha = vec![0u16; size];
    for (a, slot) in alpha.iter_mut().enumerate() {
        let mut img = 0u16;
        for t in 0..k {
            img |= o.alpha(comp(a, t)) << (d * (k - 1 - t));
        }
        *slot = img;
    }
    for a in 0..size {
        for b in 0..size {
            let mut prod = 0u16;
            for t in 0..k {
                prod |= o.mul(comp(a, sigma[t]), comp(b, t)) << (d * (k - 1 - t));
            }
            mul[a * size + b] = prod;
        }
    }
    OnoiRing::new(dim, mul, alpha)
}

/// The twisted matrix ring `M_n^sigma(O)`: n x n matrices over O with
/// elementwise alpha and `(a . b)_{i,j} = sum_k a_{sigma(i,k)} * b_{k,j}`.
/// `sigma` permutes the n^2 cell indices `i*n + k`.
pub fn matrix_ring(o: &OnoiRing, n: usize, sigma: &[usize]) -> Result<OnoiRing, OnoiError> {
    let cells = n * n;
    if sigma.len() != cells {
        return Err(OnoiError::BadPermutation(sigma.len(), cells));
    }
    let mut seen = vec![false; cells];
    for &s in sigma {
        if s >= cells || std::mem::replace(&mut seen[s], true) {
            return Err(OnoiError::BadPermutation(sigma.len(), cells));
        }
    }
    let d = o.dim;
    let dim = cells * d;
    if dim > 8 {
        return Err(OnoiError::DimensionTooLarge(dim));
    }
    let size = 1usize << dim;
    let mask = (1u16 << d) - 1;
    let cell = |v: usize, c: usize| -> u16 { (v >> (d * (cells - 1 - c))) as u16 & mask };
    let mut alpha = vec![0u16; size];
    for (a, slot) in alpha.iter_mut().enumerate() {
        let mut img = 0u16;
        for c in 0..cells {
            img |= o.alpha(cell(a, c)) << (d * (cells - 1 - c));
        }
        *slot = img;
    }
    let mut mul = vec![0u16; size * size];
    for a in 0..size {
        for b in 0..size {
            let mut prod = 0u16;
            for i in 0..n {
                for j in 0..n {
                    let mut acc = 0u16;
                    for k in 0..n {
                        acc ^= o.mul(cell(a, sigma[i * n + k]), cell(b, k * n + j));
                    }
                    prod |= acc << (d * (cells - 1 - (i * n + j)));
                }
            }
            mul[a * size + b] = prod;
        }
    }
    OnoiRing::new(dim, mul, alpha)
}

/// A trilinear Onoi mapping `mu: O1^3 -> O2`, stored by its values on basis
/// triples and evaluated by trilinear extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnoiMapping {
    source: OnoiRing,
    target: OnoiRing,
    basis: Vec<u16>, // dim1^3 values, index (t1*dim1 + t2)*dim1 + t3
}

impl OnoiMapping {
    pub fn new(source: OnoiRing, target: OnoiRing, basis: Vec<u16>) -> Result<Self, OnoiError> {
        let d = source.dim;
        if basis.len() != d * d * d {
            return Err(OnoiError::Structure(format!(
                "expected {} basis values, got {}",
                d * d * d,
                basis.len()
            )));
        }
        if basis.iter().any(|&v| v as usize >= target.size()) {
            return Err(OnoiError::Structure("basis value out of target range".into()));
        }
        Ok(OnoiMapping {
            source,
            target,
            basis,
        })
    }

    pub fn source(&self) -> &OnoiRing {
        &self.source
    }

    pub fn target(&self) -> &OnoiRing {
        &self.target
    }

    pub fn eval(&self, x: u16, y: u16, z: u16) -> u16 {
        let d = self.source.dim;
        let mut acc = 0u16;
        let mut xb = x;
        while xb != 0 {
            let t1 = xb.trailing_zeros() as usize;
            xb &= xb - 1;
            let mut yb = y;
            while yb != 0 {
                let t2 = yb.trailing_zeros() as usize;
                yb &= yb - 1;
                let mut zb = z;
                while zb != 0 {
                    let t3 = zb.trailing_zeros() as usize;
                    zb &= zb - 1;
                    acc ^= self.basis[(t1 * d + t2) * d + t3];
                }
            }
        }
        acc
    }

    /// Check trilinearity on sums and the intertwining conditions
    /// (OM1)-(OM3) exhaustively over `O1^3`.
    pub fn validate(&self) -> Result<(), MappingViolation> {
        let size = self.source.size() as u16;
        let o1 = &self.source;
        let o2 = &self.target;
        // trilinearity in each slot
        for x in 0..size {
            for y in 0..size {
                for z in 0..size {
                    let base = self.eval(x, y, z);
                    if x > 0 {
                        let x2 = x - 1; // arbitrary second argument sweep
                        if self.eval(x ^ x2, y, z) != base ^ self.eval(x2, y, z) {
                            return Err(MappingViolation::NotTrilinear { slot: 0, x, y, z });
                        }
                    }
                    if y > 0 {
                        let y2 = y - 1;
                        if self.eval(x, y ^ y2, z) != base ^ self.eval(x, y2, z) {
                            return Err(MappingViolation::NotTrilinear { slot: 1, x, y, z });
                        }
                    }
                    if z > 0 {
                        let z2 = z - 1;
                        if self.eval(x, y, z ^ z2) != base ^ self.eval(x, y, z2) {
                            return Err(MappingViolation::NotTrilinear { slot: 2, x, y, z });
                        }
                    }
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if self.eval(o1.alpha(a), o1.alpha(b), o1.alpha(c)) != o2.alpha(self.eval(a, b, c))
                    {
                        return Err(MappingViolation::Om1 { a, b, c });
                    }
                    if self.eval(o1.alpha(a), b, c) != self.eval(a, o1.alpha(b), o1.alpha(c)) {
                        return Err(MappingViolation::Om2 { a, b, c });
                    }
                    if self.eval(a, o1.alpha(b), c) != self.eval(a, b, o1.alpha(c)) {
                        return Err(MappingViolation::Om3 { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Exhaustive check of the mediality identities: `(mu1)` is
    /// `mu(a,b,b) = mu(b,a,a)` and `(mu2)` is `mu(a,b,c) = mu(a,c,b)`.
    /// Returns the lexicographically first witness on failure.
    pub fn check_mu_identities(&self) -> Result<(), MuViolation> {
        let size = self.source.size() as u16;
        for a in 0..size {
            for b in 0..size {
                if self.eval(a, b, b) != self.eval(b, a, a) {
                    return Err(MuViolation::Mu1 { a, b });
                }
            }
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if self.eval(a, b, c) != self.eval(a, c, b) {
                        return Err(MuViolation::Mu2 { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The canonical Onoi mapping `mu(a,b,c) = a(bc)` on `O`.
pub fn canonical_mapping(o: &OnoiRing) -> OnoiMapping {
    let d = o.dim;
    let mut basis = vec![0u16; d * d * d];
    for t1 in 0..d {
        for t2 in 0..d {
            for t3 in 0..d {
                basis[(t1 * d + t2) * d + t3] =
                    o.mul(1 << t1, o.mul(1 << t2, 1 << t3));
            }
        }
    }
    OnoiMapping {
        source: o.clone(),
        target: o.clone(),
        basis,
    }
}

/// The mapping `((a,b),(c,d),(u,v)) -> b(du)` from the direct power `O^2`
/// to `O`.
pub fn split_mapping(o: &OnoiRing) -> Result<OnoiMapping, OnoiError> {
    let source = power_sigma(o, 2, &[0, 1])?;
    let d = o.dim;
    let sd = source.dim; // 2d
    // bit t of a source value: t < d -> second component, t >= d -> first
    let second = |t: usize| -> u16 {
        if t < d {
            1 << t
        } else {
            0
        }
    };
    let first = |t: usize| -> u16 {
        if t >= d {
            1 << (t - d)
        } else {
            0
        }
    };
    let mut basis = vec![0u16; sd * sd * sd];
    for t1 in 0..sd {
        for t2 in 0..sd {
            for t3 in 0..sd {
                basis[(t1 * sd + t2) * sd + t3] =
                    o.mul(second(t1), o.mul(second(t2), first(t3)));
            }
        }
    }
    OnoiMapping::new(source, o.clone(), basis)
}

/// The affine latin quandle `Aff(O)`: `a*b = alpha^2(a) + alpha(b)`.
pub fn aff_of_onoi(o: &OnoiRing) -> MagmaTable {
    let size = o.size();
    let mut table = vec![0u16; size * size];
    for a in 0..size {
        for b in 0..size {
            table[a * size + b] = o.alpha2(a as u16) ^ o.alpha(b as u16);
        }
    }
    MagmaTable::new(size, table).expect("entries in range")
}
