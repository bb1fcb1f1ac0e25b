//! The section-4 search driver: generate the internal library of latin
//! quandles of 2-power order, loop over admissible fibers and psi classes,
//! solve each Z_LD system, and test generators against (M). Also the
//! named constructions behind the `construct` CLI command.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{
    admissible_class_reps, has_admissible_automorphism, signatures_of_order, AbelianGroup2,
    EndoMatrix,
};
use crate::extensions::Cocycle;
use crate::onoi::{canonical_mapping, power_sigma, split_mapping, OnoiRing};
use crate::quandle::{affine_quandle, direct_product, is_isomorphic, MagmaTable};
use crate::solver::{assemble, nonmedial_generator, solve_zld};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("order {0} is not a supported library order (2^m, m <= 5)")]
    UnsupportedOrder(usize),
    #[error("k = {0} outside the supported range 4..=7")]
    UnsupportedK(u32),
    #[error("base quandle of order {0} is not medial; the affine-library inference does not apply")]
    NonMedialBase(usize),
    #[error("construction error: {0}")]
    Construct(String),
}

/// A deduplicated list of latin quandles of one order, with provenance.
#[derive(Debug, Clone)]
pub struct QuandleLibrary {
    order: usize,
    members: Vec<MagmaTable>,
    provenance: Vec<String>,
}

impl QuandleLibrary {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn members(&self) -> &[MagmaTable] {
        &self.members
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn signature_label(sig: &[u32]) -> String {
    let parts: Vec<String> = sig.iter().map(|k| k.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// All affine latin quandles of the given 2-power order (`order = 2^m`,
/// `m <= 5`) up to isomorphism. Complete for latin quandles below order 64,
/// where every latin quandle of 2-power order is affine.
pub fn build_library(order: usize) -> Result<QuandleLibrary, SearchError> {
    if !order.is_power_of_two() || order > 32 {
        return Err(SearchError::UnsupportedOrder(order));
    }
    let m = order.trailing_zeros();
    if order == 1 {
        return Ok(QuandleLibrary {
            order,
            members: vec![MagmaTable::trivial()],
            provenance: vec!["trivial".into()],
        });
    }
    let mut members: Vec<MagmaTable> = Vec::new();
    let mut provenance: Vec<String> = Vec::new();
    for sig in signatures_of_order(m) {
        let g = AbelianGroup2::new(sig.clone()).expect("valid signature");
        if !has_admissible_automorphism(&g).expect("supported order") {
            continue;
        }
        for (ci, psi) in admissible_class_reps(&g)
            .expect("supported order")
            .iter()
            .enumerate()
        {
            let q = affine_quandle(&g, psi).expect("admissible");
            debug_assert!(q.is_quandle() && q.is_latin());
            if members.iter().all(|m| is_isomorphic(m, &q).is_none()) {
                members.push(q);
                provenance.push(format!("affine{}c{}", signature_label(&sig), ci));
            }
        }
    }
    Ok(QuandleLibrary {
        order,
        members,
        provenance,
    })
}

/// One `(A, psi-class, F)` unit of the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRecord {
    pub fiber_signature: Vec<u32>,
    pub psi_entries: Vec<u64>,
    pub base_provenance: String,
    pub base_fingerprint: String,
    pub generator_count: usize,
    pub witness: Option<Cocycle>,
}

/// The aggregated result of `search(k)`.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub k: u32,
    pub records: Vec<SearchRecord>,
    pub elapsed: Duration,
}

impl SearchReport {
    /// YES iff some record carries a non-(M) witness, i.e. a non-affine
    /// latin quandle of order 2^k arises as a central extension.
    pub fn verdict_yes(&self) -> bool {
        self.records.iter().any(|r| r.witness.is_some())
    }

    /// Canonical plain-text report: header (verdict, counts) then one line
    /// per record in deterministic order. Timing is deliberately excluded
    /// so reports are byte-identical across runs.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("search k={} order={}\n", self.k, 1u64 << self.k));
        out.push_str("note: base library = affine latin quandles, complete below order 64\n");
        out.push_str(&format!(
            "verdict {}\n",
            if self.verdict_yes() { "YES" } else { "NO" }
        ));
        out.push_str(&format!("records {}\n", self.records.len()));
        for r in &self.records {
            let witness = match &r.witness {
                None => "none".to_string(),
                Some(c) => {
                    let vals: Vec<String> = c.values().iter().map(|v| v.to_string()).collect();
                    vals.join(",")
                }
            };
            let psi: Vec<String> = r.psi_entries.iter().map(|e| e.to_string()).collect();
            out.push_str(&format!(
                "record A={} psi=[{}] F={} fp={} gens={} witness={}\n",
                signature_label(&r.fiber_signature),
                psi.join(","),
                r.base_provenance,
                r.base_fingerprint,
                r.generator_count,
                witness,
            ));
        }
        out
    }
}

struct WorkUnit {
    fiber: AbelianGroup2,
    psi: EndoMatrix,
    base: MagmaTable,
    provenance: String,
}

fn run_unit(u: &WorkUnit) -> Result<SearchRecord, SearchError> {
    if !u.base.is_medial() {
        return Err(SearchError::NonMedialBase(u.base.order()));
    }
    let system = assemble(&u.base, &u.fiber, &u.psi)
        .map_err(|e| SearchError::Construct(e.to_string()))?;
    let gens = solve_zld(&system);
    let witness = nonmedial_generator(&system, &gens);
    Ok(SearchRecord {
        fiber_signature: u.fiber.signature().to_vec(),
        psi_entries: u.psi.entries().to_vec(),
        base_provenance: u.provenance.clone(),
        base_fingerprint: u.base.fingerprint(),
        generator_count: gens.len(),
        witness,
    })
}

/// The 5-step search for non-affine latin quandles of order `2^k` arising
/// as central extensions: for every abelian fiber `A` with `|A| = 2^l`,
/// `l in 2..=k-2`, every admissible psi up to conjugacy, and every latin
/// quandle `F` of order `2^{k-l}`, solve `Z_LD(F,A,psi)` and test the
/// generators against (M).
pub fn search(k: u32) -> Result<SearchReport, SearchError> {
    if !(4..=7).contains(&k) {
        return Err(SearchError::UnsupportedK(k));
    }
    let start = Instant::now();
    let mut units: Vec<WorkUnit> = Vec::new();
    for l in 2..=k - 2 {
        let base_order = 1usize << (k - l);
        let library = build_library(base_order)?;
        for sig in signatures_of_order(l) {
            let g = AbelianGroup2::new(sig).expect("valid signature");
            if !has_admissible_automorphism(&g).expect("supported order") {
                continue;
            }
            for psi in admissible_class_reps(&g).expect("supported order") {
                for (f, prov) in library.members().iter().zip(library.provenance()) {
                    units.push(WorkUnit {
                        fiber: g.clone(),
                        psi: psi.clone(),
                        base: f.clone(),
                        provenance: prov.clone(),
                    });
                }
            }
        }
    }
    // small systems in parallel; order-32 bases sequentially (their
    // assembled matrices are large)
    let records: Result<Vec<SearchRecord>, SearchError> = if units
        .iter()
        .all(|u| u.base.order() <= 16)
    {
        units.par_iter().map(run_unit).collect()
    } else {
        units.iter().map(run_unit).collect()
    };
    Ok(SearchReport {
        k,
        records: records?,
        elapsed: start.elapsed(),
    })
}

/// Example construction of order 64: `Q(O^2, O, mu)` with
/// `mu((a,b),(c,d),(e,f)) = b(de)` over a 4-element Onoi ring. Non-affine
/// when the ring has an element with `e(ee) != 0`.
pub fn construct_extension_64(ring: &OnoiRing) -> Result<MagmaTable, SearchError> {
    if ring.size() != 4 {
        return Err(SearchError::Construct(format!(
            "extension-64 needs a 4-element ring, got {}",
            ring.size()
        )));
    }
    let mu = split_mapping(ring).map_err(|e| SearchError::Construct(e.to_string()))?;
    crate::extensions::quandle_qoomu(ring, &mu).map_err(|e| SearchError::Construct(e.to_string()))
}

/// Example construction of order 256: the canonical mapping on the twisted
/// square `O^sigma`, `sigma` the transposition, over a 4-element ring.
pub fn construct_extension_256(ring: &OnoiRing) -> Result<MagmaTable, SearchError> {
    if ring.size() != 4 {
        return Err(SearchError::Construct(format!(
            "extension-256 needs a 4-element ring, got {}",
            ring.size()
        )));
    }
    let sq = power_sigma(ring, 2, &[1, 0]).map_err(|e| SearchError::Construct(e.to_string()))?;
    let mu = canonical_mapping(&sq);
    crate::extensions::quandle_qoomu(&sq, &mu).map_err(|e| SearchError::Construct(e.to_string()))
}

/// Direct product of two tables (kept here for the CLI `construct product`).
pub fn construct_product(p: &MagmaTable, q: &MagmaTable) -> MagmaTable {
    direct_product(p, q)
}

/// Predicted non-mediality witness for `construct_extension_64` /
/// `construct_extension_256` output: the cocycle-level (M) violation lifted
/// to zero-fiber elements. `None` when the extension is medial. Lets
/// callers avoid the full `|Q|^4` scan on order-256 tables.
pub fn extension_medial_seed(
    ring: &OnoiRing,
    order: usize,
) -> Result<Option<(usize, usize, usize, usize)>, SearchError> {
    let (o2, mu) = match order {
        64 => {
            let mu = split_mapping(ring).map_err(|e| SearchError::Construct(e.to_string()))?;
            (ring.clone(), mu)
        }
        256 => {
            let sq = power_sigma(ring, 2, &[1, 0])
                .map_err(|e| SearchError::Construct(e.to_string()))?;
            let mu = canonical_mapping(&sq);
            (sq.clone(), mu)
        }
        other => return Err(SearchError::UnsupportedOrder(other)),
    };
    let spec = crate::extensions::spec_qoomu(&o2, &mu)
        .map_err(|e| SearchError::Construct(e.to_string()))?;
    let m = spec.fiber().order() as usize;
    Ok(crate::extensions::check_m(&spec)
        .map_err(|e| SearchError::Construct(e.to_string()))?
        .err()
        .map(|w| (w.a * m, w.b * m, w.c * m, w.d * m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::onoi::four_element_rings;

    #[test]
    fn library_small_orders() {
        assert_eq!(build_library(1).unwrap().len(), 1);
        assert_eq!(build_library(2).unwrap().len(), 0);
        assert_eq!(build_library(4).unwrap().len(), 1);
        assert_eq!(build_library(8).unwrap().len(), 2);
        assert!(build_library(64).is_err());
        assert!(build_library(3).is_err());
    }

    #[test]
    fn library_members_are_latin_quandles_pairwise_noniso() {
        for order in [4usize, 8, 16] {
            let lib = build_library(order).unwrap();
            for m in lib.members() {
                assert!(m.is_quandle() && m.is_latin());
                assert_eq!(m.order(), order);
            }
            for i in 0..lib.len() {
                for j in i + 1..lib.len() {
                    assert!(
                        is_isomorphic(&lib.members()[i], &lib.members()[j]).is_none(),
                        "members {i} and {j} of order {order} are isomorphic"
                    );
                }
            }
        }
    }

    #[test]
    fn product_of_order4_is_in_library16() {
        let lib4 = build_library(4).unwrap();
        let f4 = &lib4.members()[0];
        let prod = direct_product(f4, f4);
        let lib16 = build_library(16).unwrap();
        assert!(lib16
            .members()
            .iter()
            .any(|m| is_isomorphic(m, &prod).is_some()));
    }

    #[test]
    fn search_k4_no() {
        let report = search(4).unwrap();
        assert!(!report.verdict_yes());
        assert_eq!(report.records.len(), 1);
    }

    #[test]
    fn search_k5_no() {
        let report = search(5).unwrap();
        assert!(!report.verdict_yes());
        // A=Z_2^2 x library(8)=2, A=Z_2^3 (2 classes) x library(4)=1
        assert_eq!(report.records.len(), 4);
    }

    #[test]
    fn search_rejects_out_of_range() {
        assert_eq!(search(3).unwrap_err(), SearchError::UnsupportedK(3));
        assert_eq!(search(8).unwrap_err(), SearchError::UnsupportedK(8));
    }

    #[test]
    fn record_count_formula_holds() {
        for k in [4u32, 5] {
            let report = search(k).unwrap();
            let mut expected = 0usize;
            for l in 2..=k - 2 {
                let lib = build_library(1 << (k - l)).unwrap();
                for sig in signatures_of_order(l) {
                    let g = AbelianGroup2::new(sig).unwrap();
                    if has_admissible_automorphism(&g).unwrap() {
                        expected += admissible_class_reps(&g).unwrap().len() * lib.len();
                    }
                }
            }
            assert_eq!(report.records.len(), expected);
        }
    }

    #[test]
    fn report_text_is_stable() {
        let r1 = search(4).unwrap();
        let r2 = search(4).unwrap();
        assert_eq!(r1.to_text(), r2.to_text());
        assert!(r1.to_text().contains("verdict NO"));
    }

    #[test]
    fn construct_64_shapes() {
        let [z, r1, _, _] = four_element_rings();
        let t = construct_extension_64(&r1).unwrap();
        assert_eq!(t.order(), 64);
        assert!(t.is_quandle() && t.is_latin());
        assert!(!t.is_medial());
        // zero ring gives a medial (affine) quandle instead
        let t0 = construct_extension_64(&z).unwrap();
        assert!(t0.is_medial());
    }

    #[test]
    fn construct_256_shape() {
        let [_, r1, _, _] = four_element_rings();
        let t = construct_extension_256(&r1).unwrap();
        assert_eq!(t.order(), 256);
        assert!(t.is_quandle());
        assert!(t.is_latin());
        // non-mediality via the lifted base witness is covered by the
        // extensions tests; here spot-check a base-level witness lift
        let sq = power_sigma(&r1, 2, &[1, 0]).unwrap();
        let mu = canonical_mapping(&sq);
        let spec = crate::extensions::spec_qoomu(&sq, &mu).unwrap();
        let w = crate::extensions::check_m(&spec).unwrap().unwrap_err();
        let m = spec.fiber().order() as usize;
        assert!(t.witness_holds(&crate::quandle::MedialityWitness {
            a: w.a * m,
            b: w.b * m,
            c: w.c * m,
            d: w.d * m,
        }));
    }
}
