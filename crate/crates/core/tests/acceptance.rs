//! Acceptance suite: one test per criterion, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them). Criterion 8 is a
//! long-running search gated behind the QUANDLES_LONG_RUN environment
//! variable; when skipped it is reported as NOT RUN, never as passed.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latin_quandles::algebra::{
    admissible_automorphisms, admissible_class_reps, has_admissible_automorphism, howell_form,
    kernel_basis, span_contains, AbelianGroup2,
};
use latin_quandles::extensions::{
    build_extension, check_ld, check_m, spec_qoomu, Cocycle, ExtensionSpec,
};
use latin_quandles::onoi::{
    canonical_mapping, classify_onoi_rings, four_element_rings, power_sigma, rings_isomorphic,
    split_mapping,
};
use latin_quandles::oracle::{count_ld_cocycles, lifting_kernel};
use latin_quandles::quandle::{affine_quandle, direct_product, MagmaTable};
use latin_quandles::search::{
    build_library, construct_extension_256, construct_extension_64, extension_medial_seed, search,
};
use latin_quandles::solver::{assemble, solve_zld, span_count};

struct Criterion {
    number: u32,
    start: Instant,
    limit: Duration,
}

impl Criterion {
    fn begin(number: u32, limit_secs: u64) -> Self {
        Criterion {
            number,
            start: Instant::now(),
            limit: Duration::from_secs(limit_secs),
        }
    }

    fn finish(self, detail: &str) {
        let elapsed = self.start.elapsed();
        let ok = elapsed <= self.limit;
        println!(
            "criterion {}: {} — {} ({:.1?} of {:?} budget)",
            self.number,
            if ok { "PASS" } else { "FAIL" },
            detail,
            elapsed,
            self.limit
        );
        assert!(
            ok,
            "criterion {} exceeded its runtime budget: {:.1?} > {:?}",
            self.number, elapsed, self.limit
        );
    }
}

#[test]
fn criterion_01_onoi_foundations() {
    let c = Criterion::begin(1, 10);
    let rings = classify_onoi_rings(2).unwrap();
    assert_eq!(rings.len(), 4, "expected exactly 4 rings up to isomorphism");
    // entry-for-entry match with the printed tables, up to relabeling
    let printed = four_element_rings();
    for (i, p) in printed.iter().enumerate() {
        let hits = rings
            .iter()
            .filter(|r| rings_isomorphic(r, p, true))
            .count();
        assert_eq!(hits, 1, "printed table {i} must match exactly one class");
    }
    for r in &rings {
        assert_eq!(r.validate(), Ok(()));
    }
    c.finish("classify_onoi_rings(2) = 4 classes matching the printed tables");
}

#[test]
fn criterion_02_order_64_existence() {
    let rings = four_element_rings();
    for (i, ring) in rings.iter().enumerate().skip(1) {
        let c = Criterion::begin(2, 30);
        let t = construct_extension_64(ring).unwrap();
        assert_eq!(t.order(), 64);
        assert!(t.is_quandle(), "ring {i}: quandle predicates");
        assert!(t.is_latin(), "ring {i}: latin");
        let w = t.medial_witness().expect("non-mediality witness");
        assert!(t.witness_holds(&w));
        c.finish(&format!(
            "extension-64 over nonzero ring {i}: latin quandle, non-medial at ({},{},{},{})",
            w.a, w.b, w.c, w.d
        ));
    }
}

#[test]
fn criterion_03_order_256_existence() {
    let c = Criterion::begin(3, 600);
    let [_, r1, _, _] = four_element_rings();
    let t = construct_extension_256(&r1).unwrap();
    assert_eq!(t.order(), 256);
    assert!(t.is_quandle());
    assert!(t.is_latin());
    // directed search seeded by the e1/e2 violation, full scan as fallback
    let seed = extension_medial_seed(&r1, 256)
        .unwrap()
        .expect("predicted violation");
    let w = t
        .medial_witness_seeded(&[seed])
        .expect("non-mediality witness");
    assert!(t.witness_holds(&w));
    c.finish(&format!(
        "extension-256: latin quandle of order 256, non-medial at ({},{},{},{})",
        w.a, w.b, w.c, w.d
    ));
}

#[test]
fn criterion_04_ld_bi_implication() {
    let c = Criterion::begin(4, 600);
    let g = AbelianGroup2::elementary(2);
    let psi = admissible_class_reps(&g).unwrap().remove(0);
    let f = affine_quandle(&g, &psi).unwrap();
    let system = assemble(&f, &g, &psi).unwrap();
    let gens = solve_zld(&system);
    assert!(!gens.is_empty());

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut solutions: Vec<Cocycle> = gens.clone();
    for _ in 0..200 {
        let mut acc = Cocycle::zero(f.clone(), g.clone());
        for gen in &gens {
            if rng.gen_bool(0.5) {
                acc = acc.add(gen).unwrap();
            }
        }
        solutions.push(acc);
    }
    let mut non_solutions: Vec<Cocycle> = Vec::new();
    while non_solutions.len() < 200 {
        let values: Vec<u16> = (0..16).map(|_| rng.gen_range(0..4)).collect();
        let theta = Cocycle::new(f.clone(), g.clone(), values).unwrap();
        let spec = ExtensionSpec::new(theta.clone(), psi.clone()).unwrap();
        if check_ld(&spec).unwrap().is_err() {
            non_solutions.push(theta);
        }
    }
    let mut discrepancies = 0usize;
    for theta in solutions.iter().chain(&non_solutions) {
        let spec = ExtensionSpec::new(theta.clone(), psi.clone()).unwrap();
        let ld_ok = check_ld(&spec).unwrap().is_ok();
        let table = build_extension(&spec).unwrap();
        if ld_ok != (table.is_quandle() && table.is_latin()) {
            discrepancies += 1;
        }
        if ld_ok && (check_m(&spec).unwrap().is_ok() != table.is_medial()) {
            discrepancies += 1;
        }
    }
    assert_eq!(discrepancies, 0);
    c.finish(&format!(
        "bi-implication over {} span elements and 200 non-solutions, 0 discrepancies",
        solutions.len()
    ));
}

#[test]
fn criterion_05_ext_medial_equivalence() {
    let c = Criterion::begin(5, 600);
    let mut checked = 0usize;
    for ring in four_element_rings() {
        let mut cases = vec![(ring.clone(), canonical_mapping(&ring))];
        let split = split_mapping(&ring).unwrap();
        cases.push((ring.clone(), split));
        for sigma in [[0usize, 1], [1, 0]] {
            let sq = power_sigma(&ring, 2, &sigma).unwrap();
            let mu = canonical_mapping(&sq);
            cases.push((sq, mu));
        }
        for (o2, mu) in cases {
            assert_eq!(mu.validate(), Ok(()), "mapping must be a valid Onoi mapping");
            let spec = spec_qoomu(&o2, &mu).unwrap();
            assert_eq!(
                check_m(&spec).unwrap().is_ok(),
                mu.check_mu_identities().is_ok(),
                "check_M and the (mu1)/(mu2) identities must agree"
            );
            checked += 1;
        }
    }
    c.finish(&format!(
        "check_M(theta_from_mu) == check_mu_identities on {checked} mappings, 0 discrepancies"
    ));
}

#[test]
fn criterion_06_nonexistence_k4_k5() {
    let c = Criterion::begin(6, 300);
    for k in [4u32, 5] {
        let report = search(k).unwrap();
        assert!(!report.verdict_yes(), "search({k}) must answer NO");
        assert!(
            report.records.iter().all(|r| r.witness.is_none()),
            "every generating set must be fully (M)-satisfying"
        );
    }
    c.finish("search(4) and search(5) verdict NO, all generators (M)-satisfying");
}

#[test]
fn criterion_07_order_64_table() {
    let c = Criterion::begin(7, 7200);
    let report = search(6).unwrap();
    assert!(report.verdict_yes(), "search(6) must answer YES");

    // A = Z_2^3, base order 8: exactly 2 witnessed (F, psi-class) pairs,
    // on distinct base quandles, one psi class each
    let z23: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.fiber_signature == vec![1, 1, 1])
        .collect();
    let z23_wit: Vec<_> = z23.iter().filter(|r| r.witness.is_some()).collect();
    assert_eq!(z23_wit.len(), 2, "exactly 2 order-8 bases over Z_2^3");
    assert_ne!(
        z23_wit[0].base_provenance, z23_wit[1].base_provenance,
        "the two witnessed order-8 records must involve distinct bases"
    );
    for w in &z23_wit {
        let same_base_wits = z23_wit
            .iter()
            .filter(|r| r.base_provenance == w.base_provenance)
            .count();
        assert_eq!(same_base_wits, 1, "one psi class per order-8 base");
    }

    // A = Z_2^2, base order 16: 8 of the 9 library members carry witnesses,
    // among them the product 4_1 x 4_1; the lone unwitnessed base is the
    // class whose left translations have order 5 (cycle type 1.5.5.5).
    let z22: Vec<_> = report
        .records
        .iter()
        .filter(|r| r.fiber_signature == vec![1, 1])
        .collect();
    assert_eq!(z22.len(), 9, "order-16 library size");
    let z22_wit: Vec<_> = z22.iter().filter(|r| r.witness.is_some()).collect();
    assert_eq!(
        z22_wit.len(),
        8,
        "exactly 8 of the 9 order-16 bases must carry witnesses"
    );
    let lib4 = build_library(4).unwrap();
    let f4 = &lib4.members()[0];
    let prod_fp = direct_product(f4, f4).fingerprint();
    assert!(
        z22_wit.iter().any(|r| r.base_fingerprint == prod_fp),
        "4_1 x 4_1 must appear among the witnessed order-16 bases"
    );
    let unwit: Vec<_> = z22.iter().filter(|r| r.witness.is_none()).collect();
    assert!(
        unwit[0].base_fingerprint.starts_with("1.5.5.5"),
        "the unwitnessed order-16 base must be the translation-order-5 class, got {}",
        unwit[0].base_fingerprint
    );

    // no witnesses over Z_4^2 or Z_2^4
    for sig in [vec![2u32, 2], vec![1, 1, 1, 1]] {
        assert!(
            report
                .records
                .iter()
                .filter(|r| r.fiber_signature == sig)
                .all(|r| r.witness.is_none()),
            "no witnesses expected for fiber {sig:?}"
        );
    }
    c.finish(
        "search(6) YES: 2 order-8 bases over Z_2^3; 8 of 9 order-16 bases over Z_2^2 \
         (4_1 x 4_1 included, translation-order-5 class unwitnessed); none over Z_4^2 or Z_2^4",
    );
}

#[test]
fn criterion_08_long_run_k7() {
    if std::env::var("QUANDLES_LONG_RUN").is_err() {
        println!(
            "criterion 8: NOT RUN — set QUANDLES_LONG_RUN=1 to execute search(7) (hours of runtime)"
        );
        return;
    }
    let c = Criterion::begin(8, 72 * 3600);
    let report = search(7).unwrap();
    assert!(!report.verdict_yes(), "search(7) must answer NO");
    c.finish("search(7) verdict NO: all central extensions of order 128 are affine");
}

#[test]
fn criterion_09_admissibility() {
    let c = Criterion::begin(9, 60);
    let empty: [&[u32]; 6] = [&[3], &[2, 1], &[4], &[3, 1], &[2, 1, 1], &[2, 2, 1]];
    for sig in empty {
        let g = AbelianGroup2::new(sig.to_vec()).unwrap();
        assert!(
            admissible_automorphisms(&g).unwrap().is_empty(),
            "expected no admissible automorphism for {sig:?}"
        );
        assert!(!has_admissible_automorphism(&g).unwrap());
    }
    for l in 2..=5usize {
        let g = AbelianGroup2::elementary(l);
        assert!(
            has_admissible_automorphism(&g).unwrap(),
            "Z_2^{l} must admit an admissible automorphism"
        );
        assert!(!admissible_class_reps(&g).unwrap().is_empty());
    }
    let z44 = AbelianGroup2::new(vec![2, 2]).unwrap();
    assert!(!admissible_automorphisms(&z44).unwrap().is_empty());
    c.finish("admissibility matches the case analysis on all 12 listed groups");
}

#[test]
fn criterion_10_solver_oracle_equivalence() {
    let c = Criterion::begin(10, 600);
    // every Z_4^2-fiber system arising in search(6): F runs over library(4)
    let z44 = AbelianGroup2::new(vec![2, 2]).unwrap();
    let lib4 = build_library(4).unwrap();
    let mut z44_systems = 0usize;
    for psi in admissible_class_reps(&z44).unwrap() {
        for f in lib4.members() {
            let s = assemble(f, &z44, &psi).unwrap();
            let howell_gens = kernel_basis(s.matrix());
            let lifted_gens = lifting_kernel(s.matrix());
            let m = s.matrix().modulus();
            let cols = s.matrix().cols();
            let h1 = howell_form(&howell_gens, cols, m);
            let h2 = howell_form(&lifted_gens, cols, m);
            assert_eq!(h1, h2, "Howell-canonical spans must be identical");
            for v in &howell_gens {
                assert!(span_contains(&h2, v, m));
            }
            for v in &lifted_gens {
                assert!(span_contains(&h1, v, m));
            }
            z44_systems += 1;
        }
    }
    // all |F| <= 4 systems: span cardinality vs brute-force count
    let mut counted = 0usize;
    let fibers = [
        AbelianGroup2::elementary(1),
        AbelianGroup2::elementary(2),
        z44.clone(),
    ];
    for f in [MagmaTable::trivial(), lib4.members()[0].clone()] {
        for a in &fibers {
            for psi in admissible_class_reps(a).unwrap() {
                let s = assemble(&f, a, &psi).unwrap();
                let gens = solve_zld(&s);
                let brute = count_ld_cocycles(&f, a, &psi, 1 << 40);
                assert_eq!(span_count(&s, &gens), brute);
                counted += 1;
            }
        }
    }
    c.finish(&format!(
        "{z44_systems} Z_4^2 systems Howell == lifting; {counted} small systems match brute force"
    ));
}
