use bnb_lab::quantum::{qbb, GrayZonePolicy, QbbConfig};
use bnb_lab::tree::{binarize, count_nodes, monotone_wrap, truncate, walk, ChildOrder, Cost, ExplicitTree, NodePath, ProblemOracle, Visit};
use bnb_lab::{best_first, depth_first_incumbent, truncated_size};
use proptest::prelude::*;

/// Every node as (path, cost), by recursion over the path interface.
fn nodes(t: &dyn ProblemOracle, at: NodePath, out: &mut Vec<(NodePath, Cost)>) {
    out.push((at.clone(), t.cost(&at)));
    for l in t.child_labels(&at) {
        nodes(t, at.child(l), out);
    }
}

fn all_nodes(t: &dyn ProblemOracle) -> Vec<(NodePath, Cost)> {
    let mut v = Vec::new();
    if t.root_present() {
        nodes(t, NodePath::root(), &mut v);
    }
    v
}

fn optimum(t: &dyn ProblemOracle) -> Cost {
    all_nodes(t)
        .into_iter()
        .filter(|(p, c)| c.is_finite() && t.is_solution(p))
        .map(|(_, c)| c)
        .min()
        .unwrap_or(Cost::Infinite)
}

fn tree() -> impl Strategy<Value = ExplicitTree> {
    (any::<u64>(), 1usize..6, 1usize..4, 0u64..4, 0.0f64..0.3)
        .prop_map(|(seed, depth, k, step, p_inf)| ExplicitTree::random(seed, depth, k, step, p_inf))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solvers_find_the_optimum(t in tree()) {
        let want = optimum(&t);
        prop_assert_eq!(best_first(&t).unwrap().cost, want);
        for order in [ChildOrder::Label, ChildOrder::CostAscending] {
            prop_assert_eq!(depth_first_incumbent(&t, Cost::Infinite, order).cost, want);
        }
    }

    #[test]
    fn truncated_size_counts_cheap_nodes(t in tree(), c in 0u64..12) {
        let want = all_nodes(&t).iter().filter(|(_, x)| *x <= Cost::Finite(c)).count() as u64;
        prop_assert_eq!(truncated_size(&t, Cost::Finite(c)).unwrap(), want);
        prop_assert_eq!(count_nodes(&truncate(&t, Cost::Finite(c))).unwrap(), want);
    }

    #[test]
    fn best_first_explores_no_more_than_truncated_tree_and_children(t in tree()) {
        let out = best_first(&t).unwrap();
        if out.cost.is_finite() {
            // each expanded node has cost <= c_min, so lies in T_min
            let t_min = truncated_size(&t, out.cost).unwrap();
            prop_assert!(out.queries <= t_min);
        }
    }

    #[test]
    fn best_first_expands_exactly_the_truncated_tree_when_costs_are_distinct(shape in proptest::collection::vec(0usize..4, 1..40)) {
        // node ids are assigned in creation order, so cost = id is distinct and monotone
        let mut t = ExplicitTree::new(Cost::Finite(0));
        let mut next = 0usize;
        for k in shape {
            if next == t.len() { break; }
            for _ in 0..k {
                let id = t.len() as u64;
                t.add_child(next, Cost::Finite(id));
            }
            next += 1;
        }
        let out = best_first(&t).unwrap();
        let t_min = truncated_size(&t, out.cost).unwrap();
        prop_assert_eq!(out.queries + 1, t_min);
    }

    #[test]
    fn monotone_wrap_is_running_max(seed in any::<u64>()) {
        // a tree whose labels are not monotone
        let mut t = ExplicitTree::new(Cost::Finite(seed % 5));
        let a = t.add_child(ExplicitTree::ROOT, Cost::Finite(seed % 3));
        t.add_child(a, Cost::Finite(seed % 7));
        let m = monotone_wrap(&t);
        for (p, c) in all_nodes(&m) {
            let direct = p.prefixes().map(|q| t.cost(&q)).max().unwrap();
            prop_assert_eq!(c, direct);
            if let Some(parent) = p.parent() {
                prop_assert!(m.cost(&parent) <= c);
            }
        }
        let mut via_cursor = Vec::new();
        walk(&m, ChildOrder::Label, |cur| { via_cursor.push(cur.cost()); Visit::Descend });
        prop_assert_eq!(via_cursor, all_nodes(&m).into_iter().map(|x| x.1).collect::<Vec<_>>());
    }

    #[test]
    fn binarize_keeps_optimum(seed in any::<u64>(), depth in 1usize..4, k in 1usize..6) {
        let t = ExplicitTree::random(seed, depth, k, 3, 0.1);
        let b = binarize(&t);
        prop_assert_eq!(optimum(&b), optimum(&t));
        let (nb, nt) = (count_nodes(&b).unwrap(), count_nodes(&t).unwrap());
        prop_assert!(nb >= nt && nb <= 2 * nt);
        for (p, _) in all_nodes(&b) {
            prop_assert!(b.child_labels(&p).len() <= 2);
        }
    }

    #[test]
    fn qbb_matches_classical_and_respects_ledger_bounds(t in tree(), policy_ix in 0usize..4, noise in proptest::option::of(any::<u64>())) {
        let policy = GrayZonePolicy::all(11)[policy_ix];
        let shape = t.shape();
        let cfg = QbbConfig { estimate_noise: noise, ..QbbConfig::with_policy(policy) };
        let c_max = shape.c_max + 1;
        let out = qbb(&t, c_max, shape.max_nodes, cfg);
        let want = optimum(&t);
        prop_assert_eq!(out.result.cost(), want);
        let t_max = out.params.t_max;
        for it in &out.ledger.iterations {
            // below the last doubling, an accepted c_new has a tree of size <= 1.5 T
            if 2 * it.t <= t_max && it.c_new > 0 {
                prop_assert!(it.t_c_new as f64 <= 1.5 * it.t as f64);
            }
            prop_assert!(it.c_old <= it.c_new);
        }
        if let Some(last) = out.ledger.iterations.last() {
            if let Cost::Finite(c) = want {
                prop_assert!(last.c_old <= c);
            }
        }
        let sum: u64 = out.ledger.count_calls().map(|c| c.charged)
            .chain(out.ledger.search_calls().map(|c| c.charged)).sum();
        prop_assert_eq!(sum, out.ledger.total);
    }
}

#[test]
fn empty_and_single_node_trees() {
    let t = ExplicitTree::new(Cost::Infinite);
    assert_eq!(best_first(&t).unwrap().cost, Cost::Infinite);
    assert_eq!(truncated_size(&t, Cost::Finite(100)).unwrap(), 0);
    let root_only = ExplicitTree::new(Cost::Finite(3));
    let out = qbb(&root_only, 4, 1, QbbConfig::default());
    assert_eq!(out.result.cost(), Cost::Finite(3));
}

#[test]
fn ledger_json_shape() {
    let out = qbb(&ExplicitTree::fig1(), 8, 16, QbbConfig::default());
    let j = out.ledger_json();
    assert_eq!(j["schema_version"], 1);
    assert_eq!(j["params"]["c_max"], 8);
    assert_eq!(j["params"]["K"], 10.0);
    assert!(j["iterations"].as_array().unwrap().iter().all(|it| it.get("T").is_some()));
    assert_eq!(j["total"], out.ledger.total);
}
