mod common;

use std::collections::BTreeMap;

use rand::Rng;

use common::{
    random_formula, random_frame, random_model, random_set, random_space_model, rng, FrameSpec,
    Language,
};
use tangle_core::formula::parse;
use tangle_core::topo::tangle_exhaustive;
use tangle_core::{FiniteSpace, Formula, Frame, TopoError, TopoModel, WorldSet};

fn xyz() -> FiniteSpace {
    FiniteSpace::new(
        vec!["x".into(), "y".into(), "z".into()],
        vec![
            vec![],
            vec!["x".into(), "y".into()],
            vec!["x".into(), "y".into(), "z".into()],
        ],
    )
    .unwrap()
}

fn small_spaces() -> Vec<FiniteSpace> {
    (1..=4).flat_map(FiniteSpace::all_topologies).collect()
}

#[test]
fn operator_examples() {
    for sp in small_spaces() {
        let ops = sp.operators(&WorldSet::empty(sp.len()));
        assert!(ops.interior.is_empty() && ops.closure.is_empty() && ops.derivative.is_empty());
    }
    let sp = xyz();
    let ops = sp.operators(&sp.set_of(["x"]).unwrap());
    assert_eq!(ops.derivative, sp.set_of(["y", "z"]).unwrap());
    assert!(ops.closure.is_full());
    assert!(ops.interior.is_empty());

    let sp = FiniteSpace::discrete(2);
    let a = WorldSet::singleton(2, 0);
    let ops = sp.operators(&a);
    assert_eq!((ops.interior.clone(), ops.closure.clone()), (a.clone(), a));
    assert!(ops.derivative.is_empty());
}

#[test]
fn predicate_examples() {
    let p = FiniteSpace::discrete(2).predicates();
    assert_eq!(
        (p.is_td, p.dense_in_itself, p.connected),
        (true, false, false)
    );
    let p = xyz().predicates();
    assert!(!p.is_td && p.connected);
    let p = FiniteSpace::indiscrete(2).predicates();
    assert_eq!(
        (p.is_td, p.dense_in_itself, p.connected),
        (false, true, true)
    );
}

#[test]
fn topology_counts() {
    let counts: Vec<usize> = (1..=4)
        .map(|n| FiniteSpace::all_topologies(n).len())
        .collect();
    assert_eq!(counts, vec![1, 4, 29, 355]);
}

#[test]
fn validation_names_missing_witness() {
    let bad = FiniteSpace::new(
        vec!["a".into(), "b".into()],
        vec![
            vec![],
            vec!["a".into()],
            vec!["b".into()],
            vec!["a".into(), "b".into()],
        ],
    );
    assert!(bad.is_ok());
    let err = FiniteSpace::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![
            vec![],
            vec!["a".into()],
            vec!["b".into()],
            vec!["a".into(), "b".into(), "c".into()],
        ],
    )
    .unwrap_err();
    assert!(matches!(err, TopoError::MissingUnion { .. }), "{err}");
    assert!(matches!(
        FiniteSpace::new(vec!["a".into()], vec![vec!["a".into()]]),
        Err(TopoError::MissingEmpty)
    ));
    assert!(FiniteSpace::from_json(r#"{"points": ["a"], "opens": [[], ["b"]]}"#).is_err());
}

#[test]
fn kuratowski_laws() {
    for sp in small_spaces() {
        let n = sp.len();
        for a in 0..1u64 << n {
            let a = WorldSet::from_mask(n, a);
            assert_eq!(sp.closure(&a), a.union(&sp.derivative(&a)));
            for b in 0..1u64 << n {
                let b = WorldSet::from_mask(n, b);
                let u = a.union(&b);
                assert_eq!(sp.closure(&u), sp.closure(&a).union(&sp.closure(&b)));
                assert_eq!(
                    sp.derivative(&u),
                    sp.derivative(&a).union(&sp.derivative(&b))
                );
                let i = a.intersection(&b);
                assert_eq!(
                    sp.interior(&i),
                    sp.interior(&a).intersection(&sp.interior(&b))
                );
            }
        }
    }
}

#[test]
fn derived_set_of_a_point() {
    for sp in small_spaces() {
        let n = sp.len();
        let mut td = true;
        for x in 0..n {
            let dx = sp.derivative(&WorldSet::singleton(n, x));
            let cl = sp.closure(&dx);
            assert!(cl.difference(&dx).is_subset(&WorldSet::singleton(n, x)));
            assert_eq!(sp.is_closed(&dx), !cl.contains(x));
            td &= sp.is_closed(&dx);
        }
        assert_eq!(sp.is_td(), td);
    }
}

#[test]
fn model_check_examples() {
    let mut m = TopoModel::new(xyz(), BTreeMap::new()).unwrap();
    m.set_atom("p", WorldSet::singleton(3, 0));
    assert!(m
        .model_check(&parse("<t>{p, <d>p}").unwrap())
        .unwrap()
        .is_full());
    assert_eq!(
        m.model_check(&parse("<d>p").unwrap()).unwrap(),
        WorldSet::from_indices(3, [1, 2])
    );
    assert!(m.model_check(&parse("[]p").unwrap()).unwrap().is_empty());
    assert!(m.model_check(&parse("A <>p").unwrap()).unwrap().is_full());
    assert!(m
        .model_check(&parse("mu q. q").unwrap())
        .unwrap()
        .is_empty());
    assert!(m.model_check(&parse("nu q. q").unwrap()).unwrap().is_full());
}

#[test]
fn alexandrov_examples() {
    let point = FiniteSpace::alexandrov(&Frame::from_pairs(1, [(0, 0)])).unwrap();
    assert_eq!(point.opens().len(), 2);
    let chain = FiniteSpace::alexandrov(&Frame::from_pairs(2, [(0, 0), (0, 1), (1, 1)])).unwrap();
    let mut opens: Vec<Vec<usize>> = chain.opens().iter().map(|o| o.iter().collect()).collect();
    opens.sort();
    assert_eq!(opens, vec![vec![], vec![0, 1], vec![1]]);
    let cluster =
        FiniteSpace::alexandrov(&Frame::from_pairs(2, [(0, 0), (0, 1), (1, 0), (1, 1)])).unwrap();
    assert_eq!(cluster.opens().len(), 2);
    assert!(matches!(
        FiniteSpace::alexandrov(&Frame::from_pairs(3, [(0, 1), (1, 2)])),
        Err(TopoError::NotTransitive)
    ));
}

#[test]
fn alexandrov_bridge() {
    let mut rng = rng(21);
    let lang = Language::new(&["p", "q"]).tangle().mu();
    let spec = FrameSpec {
        transitive: true,
        reflexive: true,
        serial: false,
    };
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let frame = random_frame(&mut rng, n, spec);
        let km = random_model(&mut rng, frame.clone(), &["p", "q"]);
        let space = FiniteSpace::alexandrov(&frame).unwrap();
        let tm = TopoModel::new(space, km.val().clone()).unwrap();
        let f = random_formula(&mut rng, &lang, 3);
        assert_eq!(
            km.model_check(&f).unwrap(),
            tm.model_check(&f).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn tangle_gfp_matches_subset_search() {
    let mut rng = rng(22);
    let spaces = small_spaces();
    let lang = Language::new(&["p", "q"]).derived();
    for _ in 0..400 {
        let mut m = random_space_model(&mut rng, &spaces, &["p", "q"]);
        m.set_atom("r", random_set(&mut rng, m.space().len()));
        let k = rng.gen_range(1..=3);
        let members: Vec<Formula> = (0..k).map(|_| random_formula(&mut rng, &lang, 2)).collect();
        let exts: Vec<WorldSet> = members.iter().map(|d| m.model_check(d).unwrap()).collect();
        let t = m
            .model_check(&Formula::tangle(members.clone()).unwrap())
            .unwrap();
        assert_eq!(t, tangle_exhaustive(m.space(), &exts, false));
        let dt = m.model_check(&Formula::tangle_d(members).unwrap()).unwrap();
        assert_eq!(dt, tangle_exhaustive(m.space(), &exts, true));
    }
}

#[test]
fn json_round_trip() {
    let text = serde_json::to_string(&xyz().to_file()).unwrap();
    assert_eq!(FiniteSpace::from_json(&text).unwrap(), xyz());
    let model = TopoModel::from_json(
        r#"{"points": ["a", "b"], "opens": [[], ["a", "b"]], "val": {"p": ["a"]}}"#,
    )
    .unwrap();
    assert_eq!(model.atom("p"), WorldSet::singleton(2, 0));
    assert!(model.model_check(&parse("<>p").unwrap()).unwrap().is_full());
}
