use num_rational::BigRational;
use num_traits::Zero;

use amenable::amenability::{
    build_consistency_system_with, decide_base, decide_system, verify_certificate, Decision,
    SubstructureRange,
};
use amenable::expansions::{expansion_fiber, Class};
use amenable::structures::{
    boron_bn, enumerate_embeddings, induced_substructures, Digraph, FiniteStructure, VecSubspace,
};
use amenable::FieldPrime;

fn is_certificate(d: &Decision) -> bool {
    matches!(d, Decision::Certificate(_))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn s3_bases() -> Vec<FiniteStructure> {
    vec![
        FiniteStructure::Digraph(Digraph::path(2)),
        FiniteStructure::Digraph(Digraph::path(3)),
        FiniteStructure::Digraph(Digraph::path(4)),
        FiniteStructure::Digraph(Digraph::new(3, [(0, 1), (0, 2), (1, 2)]).unwrap()),
        FiniteStructure::Digraph(Digraph::new(4, [(0, 1), (2, 3)]).unwrap()),
    ]
}

#[test]
fn certificates_always_verify() {
    let mut bases: Vec<(Class, FiniteStructure)> = s3_bases().into_iter().map(|b| (Class::S3, b)).collect();
    bases.push((Class::Boron, FiniteStructure::Boron(boron_bn(2).unwrap())));
    for (class, b) in bases {
        if let Decision::Certificate(c) = decide_base(&b, class.plugin()).unwrap() {
            assert!(verify_certificate(&c, class.plugin()).unwrap(), "{class} {b:?}");
        }
    }
}

#[test]
fn measures_balance_every_fiber_pair() {
    let plugin = Class::VecSpace.plugin();
    for q in [2u32, 3] {
        let b = FiniteStructure::VecSpace(VecSubspace::full(FieldPrime::new(q).unwrap(), 2));
        let Decision::Measure(mu) = decide_base(&b, plugin).unwrap() else {
            panic!("F_{q}^2 should carry a measure");
        };
        for sub in induced_substructures(&b) {
            let a = sub.structure;
            let embeddings = enumerate_embeddings(&a, &b).unwrap();
            for x in plugin.expansions_of(&a).unwrap() {
                let masses: Vec<BigRational> = embeddings
                    .iter()
                    .map(|pi| {
                        expansion_fiber(plugin, &x, &a, &b, pi)
                            .unwrap()
                            .iter()
                            .map(|e| mu.weight(e))
                            .fold(BigRational::zero(), |s, w| s + w)
                    })
                    .collect();
                assert!(masses.windows(2).all(|w| w[0] == w[1]), "F_{q}^2: unequal fiber masses");
            }
        }
    }
}

#[test]
fn relabelling_the_base_keeps_the_outcome() {
    for b in s3_bases() {
        let expected = is_certificate(&decide_base(&b, Class::S3.plugin()).unwrap());
        for perm in permutations(b.size()) {
            let relabelled = b.relabel(&perm).unwrap();
            let got = is_certificate(&decide_base(&relabelled, Class::S3.plugin()).unwrap());
            assert_eq!(got, expected, "{b:?} under {perm:?}");
        }
    }
    let b2 = FiniteStructure::Boron(boron_bn(2).unwrap());
    for perm in permutations(4) {
        let relabelled = b2.relabel(&perm).unwrap();
        assert!(is_certificate(&decide_base(&relabelled, Class::Boron.plugin()).unwrap()));
    }
}

#[test]
fn isomorphic_copies_do_not_change_the_outcome() {
    for b in s3_bases() {
        let reps = build_consistency_system_with(&b, Class::S3.plugin(), SubstructureRange::Representatives).unwrap();
        let all = build_consistency_system_with(&b, Class::S3.plugin(), SubstructureRange::All).unwrap();
        assert!(all.rows.len() >= reps.rows.len());
        assert_eq!(
            is_certificate(&decide_system(&reps).unwrap()),
            is_certificate(&decide_system(&all).unwrap()),
            "{b:?}"
        );
    }
    let f2 = FiniteStructure::VecSpace(VecSubspace::full(FieldPrime::new(2).unwrap(), 2));
    let all = build_consistency_system_with(&f2, Class::VecSpace.plugin(), SubstructureRange::All).unwrap();
    assert!(!is_certificate(&decide_system(&all).unwrap()));
}
