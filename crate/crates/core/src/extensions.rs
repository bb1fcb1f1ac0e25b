//! Central extensions of latin quandles: cocycles, the (LD) and (M)
//! conditions, the extension table `Q x_{phi,psi,theta} A`, and the
//! `Q(O1,O2,mu)` construction from an Onoi mapping.

use thiserror::Error;

use crate::algebra::{AbelianGroup2, EndoMatrix, GroupElement};
use crate::onoi::{aff_of_onoi, OnoiMapping, OnoiRing};
use crate::quandle::MagmaTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("psi is not admissible (psi or 1-psi not bijective)")]
    NotAdmissible,
    #[error("psi acts on a different group than the fiber")]
    FiberMismatch,
    #[error("cocycle has {got} values, expected {expected}")]
    BadShape { got: usize, expected: usize },
    #[error("cocycle value {0} out of fiber range")]
    ValueOutOfRange(u64),
    #[error("base order {got} does not match expected {expected}")]
    BaseMismatch { got: usize, expected: usize },
    #[error("automorphism expected")]
    NotAutomorphism,
    #[error("parse error: {0}")]
    Parse(String),
}

/// First failure of the left-distributivity conditions on a cocycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LdFailure {
    /// `theta_{a,a} != 0`.
    Diagonal { a: usize },
    /// The (LD) relation fails at the triple `(a,b,c)`.
    Triple { a: usize, b: usize, c: usize },
}

/// First quadruple violating the mediality condition (M).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MedialFailure {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// A cocycle `theta: Q x Q -> A`, stored as fiber element indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    base: MagmaTable,
    fiber: AbelianGroup2,
    values: Vec<u16>, // |Q|^2 fiber element indices, row-major in (a,b)
}

impl Cocycle {
    pub fn new(base: MagmaTable, fiber: AbelianGroup2, values: Vec<u16>) -> Result<Self, ExtensionError> {
        let q = base.order();
        if values.len() != q * q {
            return Err(ExtensionError::BadShape {
                got: values.len(),
                expected: q * q,
            });
        }
        if let Some(&v) = values.iter().find(|&&v| v as u64 >= fiber.order()) {
            return Err(ExtensionError::ValueOutOfRange(v as u64));
        }
        Ok(Cocycle { base, fiber, values })
    }

    pub fn zero(base: MagmaTable, fiber: AbelianGroup2) -> Self {
        let q = base.order();
        let zero = fiber.index_of(&fiber.zero()) as u16;
        Cocycle {
            base,
            fiber,
            values: vec![zero; q * q],
        }
    }

    pub fn base(&self) -> &MagmaTable {
        &self.base
    }

    pub fn fiber(&self) -> &AbelianGroup2 {
        &self.fiber
    }

    /// Fiber element index of `theta_{a,b}`.
    #[inline]
    pub fn value_index(&self, a: usize, b: usize) -> u16 {
        self.values[a * self.base.order() + b]
    }

    pub fn value(&self, a: usize, b: usize) -> GroupElement {
        self.fiber.element(self.value_index(a, b) as u64)
    }

    pub fn values(&self) -> &[u16] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        let zero = self.fiber.index_of(&self.fiber.zero()) as u16;
        self.values.iter().all(|&v| v == zero)
    }

    /// Pointwise sum of two cocycles over the same base and fiber.
    pub fn add(&self, other: &Cocycle) -> Result<Cocycle, ExtensionError> {
        if self.base != other.base || self.fiber != other.fiber {
            return Err(ExtensionError::FiberMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| {
                let s = self
                    .fiber
                    .add(&self.fiber.element(x as u64), &self.fiber.element(y as u64))
                    .unwrap();
                self.fiber.index_of(&s) as u16
            })
            .collect();
        Ok(Cocycle {
            base: self.base.clone(),
            fiber: self.fiber.clone(),
            values,
        })
    }

    /// Text format: `base <order>`, `fiber <k1> <k2> ...`, then `|Q|^2`
    /// lines of fiber coordinates in row-major `(a,b)` order.
    pub fn to_text(&self) -> String {
        let mut out = format!("base {}\n", self.base.order());
        let sig: Vec<String> = self.fiber.signature().iter().map(|k| k.to_string()).collect();
        out.push_str(&format!("fiber {}\n", sig.join(" ")));
        for &v in &self.values {
            let el = self.fiber.element(v as u64);
            let coords: Vec<String> = el.coords().iter().map(|c| c.to_string()).collect();
            out.push_str(&coords.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the text format; the base table itself is carried separately.
    pub fn from_text(text: &str, base: &MagmaTable) -> Result<Self, ExtensionError> {
        let mut tokens = text.split_whitespace();
        match tokens.next() {
            Some("base") => {}
            other => return Err(ExtensionError::Parse(format!("expected 'base', got {other:?}"))),
        }
        let order: usize = tokens
            .next()
            .ok_or_else(|| ExtensionError::Parse("missing base order".into()))?
            .parse()
            .map_err(|_| ExtensionError::Parse("bad base order".into()))?;
        if order != base.order() {
            return Err(ExtensionError::BaseMismatch {
                got: order,
                expected: base.order(),
            });
        }
        match tokens.next() {
            Some("fiber") => {}
            other => return Err(ExtensionError::Parse(format!("expected 'fiber', got {other:?}"))),
        }
        // remaining tokens: signature exponents until the coordinate count
        // works out, then coordinates
        let rest: Vec<u64> = tokens
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| ExtensionError::Parse(format!("bad integer {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        // signature length n satisfies: rest.len() == n + order^2 * n
        let total = rest.len();
        let n = total / (1 + order * order);
        if n == 0 || n * (1 + order * order) != total {
            return Err(ExtensionError::Parse("token count does not fit any signature".into()));
        }
        let signature: Vec<u32> = rest[..n].iter().map(|&x| x as u32).collect();
        let fiber = AbelianGroup2::new(signature)
            .map_err(|e| ExtensionError::Parse(e.to_string()))?;
        let mut values = Vec::with_capacity(order * order);
        for chunk in rest[n..].chunks(n) {
            let el = GroupElement::from_coords(&fiber, chunk.to_vec())
                .map_err(|e| ExtensionError::Parse(e.to_string()))?;
            values.push(fiber.index_of(&el) as u16);
        }
        Cocycle::new(base.clone(), fiber, values)
    }
}

/// Per-fiber lookup tables shared by the cocycle condition checks.
struct FiberTables {
    add: Vec<u16>, // order * order
    psi: Vec<u16>,
    phi: Vec<u16>,
    order: usize,
}

impl FiberTables {
    fn build(fiber: &AbelianGroup2, psi: &EndoMatrix) -> Result<Self, ExtensionError> {
        if psi.group() != fiber {
            return Err(ExtensionError::FiberMismatch);
        }
        let order = fiber.order() as usize;
        let mut add = vec![0u16; order * order];
        for x in 0..order {
            let ex = fiber.element(x as u64);
            for y in 0..order {
                let s = fiber.add(&ex, &fiber.element(y as u64)).unwrap();
                add[x * order + y] = fiber.index_of(&s) as u16;
            }
        }
        let phi_m = psi.one_minus();
        let psi: Vec<u16> = (0..order)
            .map(|x| fiber.index_of(&psi.apply(&fiber.element(x as u64)).unwrap()) as u16)
            .collect();
        let phi: Vec<u16> = (0..order)
            .map(|x| fiber.index_of(&phi_m.apply(&fiber.element(x as u64)).unwrap()) as u16)
            .collect();
        Ok(FiberTables { add, psi, phi, order })
    }

    #[inline]
    fn add(&self, x: u16, y: u16) -> u16 {
        self.add[x as usize * self.order + y as usize]
    }
}

/// A central extension specification: base `Q`, fiber `A`, admissible
/// `psi` (with `phi = 1 - psi`), and a cocycle `theta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSpec {
    theta: Cocycle,
    psi: EndoMatrix,
}

impl ExtensionSpec {
    pub fn new(theta: Cocycle, psi: EndoMatrix) -> Result<Self, ExtensionError> {
        if psi.group() != theta.fiber() {
            return Err(ExtensionError::FiberMismatch);
        }
        if !psi.is_admissible() {
            return Err(ExtensionError::NotAdmissible);
        }
        Ok(ExtensionSpec { theta, psi })
    }

    pub fn base(&self) -> &MagmaTable {
        self.theta.base()
    }

    pub fn fiber(&self) -> &AbelianGroup2 {
        self.theta.fiber()
    }

    pub fn psi(&self) -> &EndoMatrix {
        &self.psi
    }

    pub fn phi(&self) -> EndoMatrix {
        self.psi.one_minus()
    }

    pub fn theta(&self) -> &Cocycle {
        &self.theta
    }
}

/// The central extension table: element `(a,s)` is index `a*|A| + s`, and
/// `(a,s)*(b,t) = (a*b, phi(s) + psi(t) + theta_{a,b})`.
pub fn build_extension(e: &ExtensionSpec) -> Result<MagmaTable, ExtensionError> {
    let q = e.base().order();
    let tabs = FiberTables::build(e.fiber(), &e.psi)?;
    let m = tabs.order;
    let n = q * m;
    let mut table = vec![0u16; n * n];
    for a in 0..q {
        for b in 0..q {
            let ab = e.base().get(a, b);
            let th = e.theta.value_index(a, b);
            for s in 0..m {
                let left = tabs.phi[s];
                let row = (a * m + s) * n;
                for t in 0..m {
                    let fib = tabs.add(tabs.add(left, tabs.psi[t]), th);
                    table[row + b * m + t] = (ab * m) as u16 + fib;
                }
            }
        }
    }
    Ok(MagmaTable::new(n, table).expect("indices in range"))
}

/// Verify `theta_{a,a} = 0` and the (LD) relation
/// `psi(theta_{b,c}) + theta_{a,b*c} = psi(theta_{a,c}) + phi(theta_{a,b})
/// + theta_{a*b,a*c}` over all triples. Lexicographically first failure.
pub fn check_ld(e: &ExtensionSpec) -> Result<Result<(), LdFailure>, ExtensionError> {
    let q = e.base().order();
    let f = e.base();
    let theta = &e.theta;
    let tabs = FiberTables::build(e.fiber(), &e.psi)?;
    let zero = e.fiber().index_of(&e.fiber().zero()) as u16;
    for a in 0..q {
        if theta.value_index(a, a) != zero {
            return Ok(Err(LdFailure::Diagonal { a }));
        }
    }
    for a in 0..q {
        for b in 0..q {
            let ab = f.get(a, b);
            let phi_ab = tabs.phi[theta.value_index(a, b) as usize];
            for c in 0..q {
                let lhs = tabs.add(
                    tabs.psi[theta.value_index(b, c) as usize],
                    theta.value_index(a, f.get(b, c)),
                );
                let rhs = tabs.add(
                    tabs.add(tabs.psi[theta.value_index(a, c) as usize], phi_ab),
                    theta.value_index(ab, f.get(a, c)),
                );
                if lhs != rhs {
                    return Ok(Err(LdFailure::Triple { a, b, c }));
                }
            }
        }
    }
    Ok(Ok(()))
}

/// Verify the mediality condition (M):
/// `phi(theta_{a,b}) + psi(theta_{c,d}) + theta_{a*b,c*d} =
///  phi(theta_{a,c}) + psi(theta_{b,d}) + theta_{a*c,b*d}`
/// over all quadruples. Lexicographically first failure.
pub fn check_m(e: &ExtensionSpec) -> Result<Result<(), MedialFailure>, ExtensionError> {
    let q = e.base().order();
    let f = e.base();
    let theta = &e.theta;
    let tabs = FiberTables::build(e.fiber(), &e.psi)?;
    for a in 0..q {
        for b in 0..q {
            let ab = f.get(a, b);
            let phi_ab = tabs.phi[theta.value_index(a, b) as usize];
            for c in 0..q {
                let ac = f.get(a, c);
                let phi_ac = tabs.phi[theta.value_index(a, c) as usize];
                for d in 0..q {
                    let lhs = tabs.add(
                        tabs.add(phi_ab, tabs.psi[theta.value_index(c, d) as usize]),
                        theta.value_index(ab, f.get(c, d)),
                    );
                    let rhs = tabs.add(
                        tabs.add(phi_ac, tabs.psi[theta.value_index(b, d) as usize]),
                        theta.value_index(ac, f.get(b, d)),
                    );
                    if lhs != rhs {
                        return Ok(Err(MedialFailure { a, b, c, d }));
                    }
                }
            }
        }
    }
    Ok(Ok(()))
}

/// The cocycle `theta_{a,b} = mu(a, a+b, a+b)` of Lemma-style provenance:
/// base `Aff(O1)`, fiber the additive group of the target ring.
pub fn theta_from_mu(m: &OnoiMapping) -> Cocycle {
    let base = aff_of_onoi(m.source());
    let fiber = m.target().additive_group();
    let q = base.order();
    let mut values = vec![0u16; q * q];
    for a in 0..q as u16 {
        for b in 0..q as u16 {
            let s = a ^ b;
            // fiber element index equals the ring element bitmask
            values[a as usize * q + b as usize] = m.eval(a, s, s);
        }
    }
    Cocycle::new(base, fiber, values).expect("values in range")
}

/// The extension spec for `Q(O1,O2,mu) = Aff(O1) x_{alpha2^2, alpha2, theta} (O2,+)`.
pub fn spec_qoomu(o2: &OnoiRing, m: &OnoiMapping) -> Result<ExtensionSpec, ExtensionError> {
    let theta = theta_from_mu(m);
    let psi = o2
        .alpha_matrix()
        .map_err(|e| ExtensionError::Parse(e.to_string()))?;
    ExtensionSpec::new(theta, psi)
}

/// The quandle `Q(O1,O2,mu)` as a table of order `|O1| * |O2|`.
pub fn quandle_qoomu(o2: &OnoiRing, m: &OnoiMapping) -> Result<MagmaTable, ExtensionError> {
    build_extension(&spec_qoomu(o2, m)?)
}

/// Conjugate the spec by an automorphism `a` of the fiber:
/// `psi -> a psi a^-1` and `theta -> a theta`. The built extensions are
/// isomorphic via `(x,s) -> (x, a(s))`.
pub fn conjugate_extension(e: &ExtensionSpec, a: &EndoMatrix) -> Result<ExtensionSpec, ExtensionError> {
    if a.group() != e.fiber() {
        return Err(ExtensionError::FiberMismatch);
    }
    let a_inv = a.inverse().ok_or(ExtensionError::NotAutomorphism)?;
    let psi = a
        .compose(&e.psi)
        .and_then(|m| m.compose(&a_inv))
        .map_err(|_| ExtensionError::FiberMismatch)?;
    let fiber = e.fiber().clone();
    let values = e
        .theta
        .values()
        .iter()
        .map(|&v| fiber.index_of(&a.apply(&fiber.element(v as u64)).unwrap()) as u16)
        .collect();
    let theta = Cocycle::new(e.base().clone(), fiber, values)?;
    ExtensionSpec::new(theta, psi)
}
