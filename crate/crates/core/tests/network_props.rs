use std::collections::BTreeSet;

use matnet::field::{FieldCtx, FieldElem};
use matnet::network::{
    exhaustive_solve, simulate, simulate_all, validate_code, CodeViolation, GlobalCode, InItem, Network,
    NetworkBuilder, NetworkError, SearchConfig,
};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Shape {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    sources: Vec<usize>,
    demands: BTreeSet<(usize, usize)>,
}

fn shape() -> impl Strategy<Value = Shape> {
    (2usize..=6, 1usize..=3).prop_flat_map(|(nodes, messages)| {
        (
            prop::collection::vec((0..nodes, 0..nodes), 1..=9),
            prop::collection::vec(0..nodes, messages),
            prop::collection::btree_set((0..nodes, 0..messages), 1..=4),
        )
            .prop_map(move |(raw, sources, demands)| Shape {
                nodes,
                edges: raw.into_iter().filter(|(a, b)| a != b).map(|(a, b)| (a.min(b), a.max(b))).collect(),
                sources,
                demands,
            })
    })
}

fn build(s: &Shape) -> Network {
    let mut b = NetworkBuilder::new(2);
    let messages: Vec<usize> = (0..s.sources.len()).map(|i| b.add_message(format!("m{i}"))).collect();
    let nodes: Vec<usize> = (0..s.nodes).map(|i| b.add_node(format!("x{i}"))).collect();
    for (m, &x) in s.sources.iter().enumerate() {
        b.add_source(nodes[x], messages[m]);
    }
    for &(x, m) in &s.demands {
        b.add_demand(nodes[x], messages[m]);
    }
    for &(u, v) in &s.edges {
        b.add_edge(nodes[u], nodes[v]);
    }
    b.build().unwrap()
}

fn field() -> impl Strategy<Value = FieldCtx> {
    prop::sample::select(vec![(2u32, 1u32), (3, 1), (2, 2)]).prop_map(|(p, l)| FieldCtx::new(p, l).unwrap())
}

/// A valid code: each edge gets a random combination of `In(tail)`.
fn random_code(n: &Network, f: &FieldCtx, seeds: &[u64]) -> GlobalCode {
    let dim = n.message_count();
    let mut code = GlobalCode::new(f, dim);
    let mut seeds = seeds.iter().cycle();
    for e in n.edges_in_tail_order() {
        let mut v = vec![FieldElem::ZERO; dim];
        for item in n.in_items(n.edge(e).tail) {
            let source = match item {
                InItem::Message(m) => f.unit_vector(dim, m),
                InItem::Edge(d) => code.edge(d).unwrap().to_vec(),
            };
            let c = f.constant(*seeds.next().unwrap());
            for (vi, si) in v.iter_mut().zip(source) {
                *vi = f.add(*vi, f.mul(c, si));
            }
        }
        code.set_edge(e, v);
    }
    code.fill_standard_pairs(n);
    code
}

fn assignment(f: &FieldCtx, raw: &[u64], dim: usize) -> Vec<FieldElem> {
    raw.iter().take(dim).map(|&r| f.elem(r % f.order() as u64).unwrap()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn global_and_local_formulations_agree(
        s in shape(),
        f in field(),
        seeds in prop::collection::vec(0u64..4, 1..40),
    ) {
        let n = build(&s);
        let code = random_code(&n, &f, &seeds);
        let report = validate_code(&n, &code).unwrap();
        prop_assert!(report.valid);
        let sim = simulate_all(&n, &code, 1 << 12).unwrap();
        prop_assert_eq!(report.is_solution(), sim.all_decoded());
        prop_assert_eq!(sim.assignments, (f.order() as u64).pow(n.message_count() as u32));
    }

    #[test]
    fn edge_symbols_are_linear_in_the_messages(
        s in shape(),
        f in field(),
        seeds in prop::collection::vec(0u64..4, 1..40),
        a in prop::collection::vec(0u64..4, 3),
        b in prop::collection::vec(0u64..4, 3),
        lambda in 0u64..4,
    ) {
        let n = build(&s);
        let dim = n.message_count();
        let code = random_code(&n, &f, &seeds);
        let (a, b) = (assignment(&f, &a, dim), assignment(&f, &b, dim));
        let l = f.elem(lambda % f.order() as u64).unwrap();
        let combined: Vec<FieldElem> = a.iter().zip(&b).map(|(&x, &y)| f.add(f.mul(l, x), y)).collect();
        let (sa, sb, sc) = (simulate(&n, &code, &a).unwrap(), simulate(&n, &code, &b).unwrap(), simulate(&n, &code, &combined).unwrap());
        for e in 0..n.edges().len() {
            prop_assert_eq!(sc.edge_symbols[e], f.add(f.mul(l, sa.edge_symbols[e]), sb.edge_symbols[e]));
        }
    }

    #[test]
    fn perturbed_edge_is_reported_at_its_tail(
        s in shape(),
        f in field(),
        seeds in prop::collection::vec(0u64..4, 1..40),
        pick in any::<prop::sample::Index>(),
    ) {
        let n = build(&s);
        prop_assume!(!n.edges().is_empty());
        let mut code = random_code(&n, &f, &seeds);
        let e = pick.index(n.edges().len());
        let tail = n.edge(e).tail;
        // A tail with no inputs can only send the zero vector.
        prop_assume!(n.in_items(tail).is_empty());
        code.set_edge(e, f.unit_vector(n.message_count(), 0));
        let report = validate_code(&n, &code).unwrap();
        prop_assert!(!report.valid);
        let expected = CodeViolation::EdgeOutsideSpan { node: tail, edge: e };
        prop_assert!(report.violations.contains(&expected));
    }

    #[test]
    fn exhaustive_search_is_sound_and_complete(
        s in shape(),
        f in field(),
        seeds in prop::collection::vec(0u64..4, 1..40),
    ) {
        let n = build(&s);
        let cfg = SearchConfig { cap: 1 << 14, jobs: 1 };
        let found = match exhaustive_solve(&n, &f, &cfg) {
            Err(NetworkError::SearchSpaceTooLarge { .. }) => return Ok(()),
            other => other.unwrap(),
        };
        if let Some(code) = &found {
            prop_assert!(validate_code(&n, code).unwrap().is_solution());
        }
        // A random code that happens to solve the network proves one exists.
        if validate_code(&n, &random_code(&n, &f, &seeds)).unwrap().is_solution() {
            prop_assert!(found.is_some());
        }
        let parallel = exhaustive_solve(&n, &f, &SearchConfig { jobs: 3, ..cfg }).unwrap();
        prop_assert_eq!(found, parallel);
    }
}
