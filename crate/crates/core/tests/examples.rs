mod support;

use std::collections::BTreeSet;

use msa_core::kinetics::{cf_rm_transform, KineticsClass};
use msa_core::msa::{analyze, check_rules, precheck_inflow_outflow, Verdict};
use msa_core::network::{Complex, NetworkNumbers};
use msa_core::rational::{to_f64, Rational};
use msa_core::verify::check_witness;
use support::*;

fn numbers(name: &str) -> NetworkNumbers {
    builtin_model(name).system.network().numbers()
}

#[test]
fn yeast_and_carbon_network_numbers() {
    let yeast = numbers("ermog-yeast");
    let carbon = numbers("heck-carbon");
    let rows = [
        ("species", yeast.species, carbon.species, 5, 5),
        ("complexes", yeast.complexes, carbon.complexes, 13, 14),
        ("reactant complexes", yeast.reactant_complexes, carbon.reactant_complexes, 8, 9),
        ("reactions", yeast.reactions, carbon.reactions, 13, 10),
        ("irreversible", yeast.irreversible_reactions, carbon.irreversible_reactions, 13, 6),
        ("linkage classes", yeast.linkage_classes, carbon.linkage_classes, 1, 6),
        ("strong", yeast.strong_linkage_classes, carbon.strong_linkage_classes, 13, 12),
        ("terminal", yeast.terminal_strong_linkage_classes, carbon.terminal_strong_linkage_classes, 5, 6),
        ("rank", yeast.rank, carbon.rank, 5, 4),
        ("deficiency", yeast.deficiency, carbon.deficiency, 7, 4),
    ];
    for (label, y, c, ey, ec) in rows {
        assert_eq!((y, c), (ey, ec), "{label}");
    }
}

#[test]
fn small_examples_network_numbers() {
    let cut = numbers("defone-cutpair");
    assert_eq!((cut.species, cut.rank, cut.deficiency), (3, 3, 1));
    assert_eq!((cut.linkage_classes, cut.terminal_strong_linkage_classes), (2, 3));
    let ndk = numbers("ndk-defone");
    assert_eq!((ndk.rank, ndk.deficiency, ndk.linkage_classes), (1, 1, 1));
    assert!(builtin_model("ndk-defone").system.network().is_weakly_reversible());
}

fn ids(groups: &[&[&str]]) -> BTreeSet<BTreeSet<String>> {
    groups.iter().map(|g| g.iter().map(|s| s.to_string()).collect()).collect()
}

#[test]
fn yeast_partition_basis_and_middle_shelf_groups() {
    let model = builtin_model("ermog-yeast");
    let analysis = analyze(&model.system, &model_options(&model)).unwrap();
    let net = model.system.network();
    assert!(analysis.partition.p0.is_empty());
    assert_eq!(
        class_ids(net, &analysis.partition),
        ids(&[
            &["R1", "R2"], &["R3"], &["R4"], &["R5"], &["R6"], &["R7"],
            &["R8", "R11"], &["R9"], &["R10"], &["R12"], &["R13"],
        ])
    );

    let printed = per_class(
        net,
        &analysis.partition,
        &[
            ("R1", vec![-1, 0, 0]),
            ("R3", vec![0, 0, 1]),
            ("R4", vec![1, -1, 0]),
            ("R5", vec![0, 0, 1]),
            ("R6", vec![1, 0, 0]),
            ("R7", vec![0, 0, 1]),
            ("R8", vec![0, 1, 0]),
            ("R9", vec![0, 0, -1]),
            ("R10", vec![0, 1, 0]),
            ("R12", vec![0, 0, -1]),
            ("R13", vec![0, 0, 1]),
        ],
    );
    assert_eq!(analysis.basis.len(), 3);
    assert!(same_span(&analysis.basis, &printed));

    let column = |pairs: &[(usize, &str)]| {
        let mut v = vec![zero(); 5];
        for (s, text) in pairs {
            v[*s] = dec(text);
        }
        v
    };
    let expected: BTreeSet<BTreeSet<Vec<Rational>>> = [
        vec![column(&[(1, "-0.2344")]), column(&[(0, "0.7464"), (4, "0.0243")])],
        vec![column(&[(1, "0.7318"), (4, "-0.3941")])],
        vec![column(&[(1, "8.6107")])],
        vec![column(&[(2, "0.6159"), (4, "0.1308")]), column(&[(2, "0.05"), (3, "0.533"), (4, "-0.0822")])],
        vec![column(&[(4, "1")])],
    ]
    .into_iter()
    .map(|g| g.into_iter().collect())
    .collect();
    let got: BTreeSet<BTreeSet<Vec<Rational>>> =
        analysis.equation_groups.iter().map(|g| g.iter().cloned().collect()).collect();
    assert_eq!(got, expected);
}

#[test]
fn yeast_witness_refines_to_two_distinct_equilibria() {
    let model = builtin_model("ermog-yeast");
    let analysis = analyze(&model.system, &model_options(&model)).unwrap();
    let w = analysis.witness.expect("the search emits a witness");
    let (star, r_star) = newton_full_rank(&model.system, &w.k, &w.c_star, 30);
    let (double, r_double) = newton_full_rank(&model.system, &w.k, &w.c_double_star, 30);
    assert!(r_star < 1e-12 && r_double < 1e-12, "{r_star:e} {r_double:e}");
    assert!(star.iter().chain(&double).all(|v| *v > 0.0));
    let gap = star.iter().zip(&double).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(gap > 0.5, "refined points collapse: {star:?} {double:?}");
    for (refined, original) in [(&star, &w.c_star), (&double, &w.c_double_star)] {
        for (a, b) in refined.iter().zip(original) {
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0));
        }
    }
}

#[test]
fn carbon_partition_and_basis() {
    let model = builtin_model("heck-carbon");
    let analysis = analyze(&model.system, &model_options(&model)).unwrap();
    let net = model.system.network();
    assert!(analysis.realigned.is_empty());
    assert!(analysis.partition.p0.is_empty());
    assert_eq!(
        class_ids(net, &analysis.partition),
        ids(&[&["R1"], &["R2"], &["R4", "R8"], &["R5", "R10"], &["R6"], &["R7"]])
    );
    let reversible = analysis.partition.classes.iter().filter(|c| c.reversible).count();
    assert_eq!(reversible, 1);

    let class = analysis.partition.class_of(reaction(net, "R4")).unwrap();
    let fundamental: BTreeSet<String> = analysis.fundamental.classes[class]
        .reactions
        .iter()
        .map(|&j| net.reactions()[j].id.clone())
        .collect();
    assert_eq!(fundamental, ["R3", "R4", "R8", "R9"].iter().map(|s| s.to_string()).collect());

    let printed = per_class(
        net,
        &analysis.partition,
        &[
            ("R1", vec![-1, 0]),
            ("R2", vec![1, 0]),
            ("R4", vec![1, 1]),
            ("R5", vec![0, -1]),
            ("R6", vec![0, 1]),
            ("R7", vec![0, -1]),
        ],
    );
    assert!(same_span(&analysis.basis, &printed));
    assert_eq!(analysis.verdict, Verdict::Multistationary);
}

#[test]
fn carbon_hint_reproduces_equilibria_table() {
    let model = builtin_model("heck-carbon");
    let mut options = model_options(&model);
    options.sigma = Some(ints(&[-1, -1, 1, 1, 1]));
    options.mu_hint = Some(vec![-0.062895375, -0.262273058, 0.1, 0.291558477, 1.194680148]);
    let analysis = analyze(&model.system, &options).unwrap();
    let hint = analysis.hint.expect("hint equilibria");
    let double = [16.40466123, 4.334651228, 9.508331945, 2.954105867, 0.434310288];
    let star = [15.40466123, 3.334651228, 10.50833194, 3.954105867, 1.434310288];
    for s in 0..5 {
        assert!((hint.c_double_star[s] - double[s]).abs() <= 1e-6, "c** {s}");
        assert!((hint.c_star[s] - star[s]).abs() <= 1e-6, "c* {s}");
    }
    assert!(!hint.sigma_in_subspace);
    assert!(!hint.verified);
    assert_eq!(analysis.verdict, Verdict::Multistationary);
    assert!(analysis.verification.unwrap().pass);
}

#[test]
fn carbon_search_witness_is_sound() {
    let model = builtin_model("heck-carbon");
    let analysis = analyze(&model.system, &model_options(&model)).unwrap();
    let w = analysis.witness.expect("witness");
    witness_holds(&model.system, &w, 1e-6).unwrap();
    let signature = analysis.signature.expect("signature");
    let net = model.system.network();
    check_rules(net, &analysis.partition, &analysis.fundamental, &signature.pattern, &signature.shelving).unwrap();
}

#[test]
fn deficiency_one_cut_pair_example() {
    let model = builtin_model("defone-cutpair");
    let net = model.system.network();
    let regularity = net.regularity_report();
    assert!(!regularity.t_minimal);
    assert_eq!((regularity.terminal_strong_linkage_classes, regularity.linkage_classes), (3, 2));
    assert!(!regularity.cut_pair_condition);
    let complex = |terms: &[(usize, i64)]| {
        net.complex_index(&Complex::from_terms(terms.iter().map(|&(s, c)| (s, msa_core::rational::int(c)))).unwrap())
            .unwrap()
    };
    let pair = (complex(&[(0, 1), (1, 1)]), complex(&[(2, 2)]));
    assert!(regularity
        .non_cut_pairs
        .iter()
        .any(|&(a, b)| (a, b) == pair || (b, a) == pair));

    let mut options = model_options(&model);
    let plain = analyze(&model.system, &options).unwrap();
    assert_eq!(plain.verdict, Verdict::Multistationary);
    assert_eq!(
        class_ids(net, &plain.partition),
        ids(&[&["R1"], &["R2", "R3"], &["R4", "R5"]])
    );
    assert!(same_span(&plain.basis, &[ints(&[1, -1, 1])]));

    options.sigma = Some(ints(&[3, 0, 2]));
    options.mu_hint = Some(vec![1.0, 0.0, 1.0]);
    options.kappa = Some(vec![1.0, 2.0, 2.0, 1.0, 1.0]);
    let analysis = analyze(&model.system, &options).unwrap();
    assert!(analysis.witness_from_hint);
    let w = analysis.witness.unwrap();
    let double = [1.745930121, 1.0, 1.163953414];
    let star = [4.745930121, 1.0, 3.163953414];
    for s in 0..3 {
        assert!((w.c_double_star[s] - double[s]).abs() <= 1e-6);
        assert!((w.c_star[s] - star[s]).abs() <= 1e-6);
    }
    assert!((w.k[reaction(net, "R2")] - 1.145521219).abs() <= 1e-6);
    let report = check_witness(&model.system, &w, 1e-9).unwrap();
    assert!(report.pass);
    assert!(report.residual_c_star <= 1e-9 && report.residual_c_double_star <= 1e-9);
}

#[test]
fn ndk_example_through_the_transform() {
    let model = builtin_model("ndk-defone");
    assert_eq!(model.system.classify(), KineticsClass::Ndk);
    let (system, record) = cf_rm_transform(&model.system).unwrap();
    assert_eq!(record.changes.len(), 1);
    let net = system.network();
    let r3 = reaction(net, "R3");
    assert_eq!(net.reactant(r3), &Complex::from_terms([(0, msa_core::rational::int(3))]).unwrap());
    assert_eq!(net.product(r3), &Complex::from_terms([(0, msa_core::rational::int(4))]).unwrap());
    assert_eq!(net.deficiency(), 2);

    let plain = analyze(&system, &Default::default()).unwrap();
    assert_eq!(plain.verdict, Verdict::Multistationary);

    let mut options = msa_core::msa::AnalysisOptions::default();
    options.sigma = Some(ints(&[3]));
    options.kappa = Some(vec![2.0, 1.0, 1.0, 1.0]);
    let analysis = analyze(&system, &options).unwrap();
    assert_eq!(analysis.verdict, Verdict::Multistationary);
    let w = analysis.witness.unwrap();
    assert!((w.mu[0] - 4f64.ln()).abs() <= 1e-9);
    assert_eq!((w.c_double_star[0], w.c_star[0]), (1.0, 4.0));
    let report = check_witness(&system, &w, 1e-9).unwrap();
    assert_eq!(report.residual_c_double_star, 0.0);
    assert!(report.pass);
}

#[test]
fn anderies_signature_ratio() {
    let model = builtin_model("anderies");
    let mut options = model_options(&model);
    options.sigma = Some(ints(&[-2, 1, 1]));
    let analysis = analyze(&model.system, &options).unwrap();
    assert_eq!(analysis.verdict, Verdict::Multistationary);
    let signature = analysis.signature.unwrap();
    let ratio = to_f64(&signature.mu[0]) / to_f64(&signature.mu[1]);
    assert!((ratio - 0.01 / -1.62).abs() <= 1e-9);
    let signs: Vec<bool> = signature.mu.iter().map(|v| *v > zero()).collect();
    assert_eq!(signs, [false, true, true]);
    let n = model.system.network().stoichiometric_matrix();
    let mut rows = n.row_vecs();
    for (s, row) in rows.iter_mut().enumerate() {
        row.push(signature.sigma[s].clone());
    }
    assert_eq!(oracle_rank(&rows), oracle_rank(&n.row_vecs()));

    let unguided = analyze(&model.system, &model_options(&model)).unwrap().signature.unwrap();
    let ratio = to_f64(&unguided.mu[0]) / to_f64(&unguided.mu[1]);
    assert!((ratio - 0.01 / -1.62).abs() <= 1e-9);
}

const INFLOW_MODEL: &str = r#"{
  "name": "inflow",
  "species": ["A", "B", "C"],
  "reactions": [
    {"id": "R1", "equation": "0 -> A"},
    {"id": "R2", "equation": "A + B -> A + C"},
    {"id": "R3", "equation": "C -> B"}
  ]
}"#;

#[test]
fn inflow_precheck_agrees_with_full_analysis() {
    let model = msa_core::model::parse_model(INFLOW_MODEL).unwrap();
    let hit = precheck_inflow_outflow(&model.system).expect("precheck fires");
    assert_eq!((hit.reaction.as_str(), hit.species.as_str(), hit.inflow), ("R1", "A", true));
    let analysis = analyze(&model.system, &Default::default()).unwrap();
    assert_eq!(analysis.verdict, Verdict::Monostationary);
}

#[test]
fn precheck_stays_silent_on_the_corpus() {
    for name in msa_core::corpus::names() {
        let model = builtin_model(name);
        if model.system.classify() == KineticsClass::Rdk {
            assert!(precheck_inflow_outflow(&model.system).is_none(), "{name}");
        }
    }
}
