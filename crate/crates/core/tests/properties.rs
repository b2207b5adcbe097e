use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rendezvous::agents::ScheduleAction;
use rendezvous::exploration::{covers, dfs_plan, ring_plan, unanchored_dfs_plan, walk_plan};
use rendezvous::labels::{fast_schedule_bits, modified_label, rank_subset, relabel, Label};
use rendezvous::simulator::{run, solo_run, RunConfig};
use rendezvous::sweep::GraphSetup;
use rendezvous::{Algorithm, Graph, Procedure};

const ALGORITHMS: [&str; 8] = [
    "cheap-sim",
    "cheap",
    "fast-sim",
    "fast",
    "fwr:w=2",
    "fwr:w=3",
    "doubling:cheap",
    "doubling:fast",
];

fn random_graph(n: usize, extra: usize, seed: u64) -> Graph {
    Graph::random_connected(n, extra, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn ring_setup(alg: &str, n: usize, space: u64) -> GraphSetup {
    let graph = Graph::oriented_ring(n).unwrap();
    GraphSetup::new(format!("ring:{n}"), graph, &alg.parse().unwrap(), space).unwrap()
}

prop_compose! {
    fn ring_run()(alg in prop::sample::select(&ALGORITHMS[..]), n in 3usize..=8, space in 3u64..=6)
        (alg in Just(alg), n in Just(n), space in Just(space),
         la in 1..=space, lb in 1..=space, sa in 0..n, sb in 0..n, tau in 1u64..=12, shift in 0..n)
        -> (&'static str, usize, u64, (u64, u64), (usize, usize), u64, usize)
    {
        (alg, n, space, (la, lb), (sa, sb), tau, shift)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn traversal_is_an_involution(n in 2usize..=12, extra in 0usize..=10, seed in any::<u64>()) {
        let g = random_graph(n, extra, seed);
        for v in g.nodes() {
            for p in 0..g.degree(v) {
                let (w, q) = g.traverse(v, p).unwrap();
                prop_assert_eq!(g.traverse(w, q).unwrap(), (v, p));
            }
        }
    }

    #[test]
    fn text_form_round_trips(n in 2usize..=12, extra in 0usize..=10, seed in any::<u64>()) {
        let g = random_graph(n, extra, seed);
        let back: Graph = g.to_string().parse().unwrap();
        prop_assert_eq!(&back, &g);
        let ring = Graph::oriented_ring(n.max(3)).unwrap();
        prop_assert_eq!(ring.to_string().parse::<Graph>().unwrap(), ring);
    }

    #[test]
    fn dfs_plans_cover_and_stay_short(n in 2usize..=9, extra in 0usize..=8, seed in any::<u64>()) {
        let g = random_graph(n, extra, seed);
        for start in g.nodes() {
            let plan = dfs_plan(&g, start).unwrap();
            prop_assert!(covers(&g, &plan, start));
            let moves = plan.actions().iter().filter(|a| !a.is_wait()).count();
            prop_assert!(moves <= 2 * n - 3 || n == 2 && moves == 1);
        }
    }

    #[test]
    fn unanchored_plan_covers_from_every_start(n in 2usize..=8, extra in 0usize..=6, seed in any::<u64>()) {
        let g = random_graph(n, extra, seed);
        let plan = unanchored_dfs_plan(&g).unwrap();
        prop_assert_eq!(plan.budget(), 2 * n * (2 * n - 2));
        for start in g.nodes() {
            let walk = walk_plan(&g, &plan, start).unwrap();
            prop_assert!(walk.covers_all(n));
        }
    }

    #[test]
    fn relabeled_codes_have_fixed_weight(space in 2u64..=200, weight in 1u32..=4, label in 1u64..=200) {
        prop_assume!(label <= space && u64::from(weight) <= space);
        let code = relabel(Label::new(label).unwrap(), space, weight).unwrap();
        prop_assert_eq!(code.bits.weight(), weight as usize);
        prop_assert_eq!(code.bits.len(), code.length as usize);
        prop_assert_eq!(rank_subset(&code.bits), label);
    }

    #[test]
    fn fast_bits_are_odd_and_lead_with_one(label in 1u64..=100_000) {
        let bits = fast_schedule_bits(Label::new(label).unwrap());
        prop_assert_eq!(bits.len() % 2, 1);
        prop_assert!(bits.bits()[0]);
        prop_assert_eq!(bits.len(), 2 * modified_label(Label::new(label).unwrap()).len() + 1);
    }

    #[test]
    fn rotation_shifts_positions((alg, n, space, (la, lb), (sa, sb), tau, shift) in ring_run()) {
        prop_assume!(la != lb && sa != sb);
        let setup = ring_setup(alg, n, space);
        let a = setup.execute((la, lb), (sa, sb), tau, false).unwrap();
        let b = setup.execute((la, lb), ((sa + shift) % n, (sb + shift) % n), tau, false).unwrap();
        prop_assert_eq!(a.time, b.time);
        prop_assert_eq!(a.cost, b.cost);
        prop_assert_eq!(a.positions.len(), b.positions.len());
        for (p, q) in a.positions.iter().zip(&b.positions) {
            prop_assert_eq!(((p.0 + shift) % n, (p.1 + shift) % n), *q);
        }
    }

    #[test]
    fn two_agent_run_extends_solo_runs((alg, n, space, (la, lb), (sa, sb), tau, _s) in ring_run()) {
        prop_assume!(la != lb && sa != sb);
        let setup = ring_setup(alg, n, space);
        let (xa, xb) = (setup.schedule(la), setup.schedule(lb));
        let graph = Graph::oriented_ring(n).unwrap();
        let trace = run(&RunConfig::new(&graph, (xa, sa), (xb, sb), tau), setup.horizon(tau)).unwrap();
        prop_assert_eq!(&trace, &run(&RunConfig::new(&graph, (xa, sa), (xb, sb), tau), setup.horizon(tau)).unwrap());
        let rounds = trace.positions.len() as u64;
        let solo_a = solo_run(&graph, xa, sa, rounds).unwrap();
        let solo_b = solo_run(&graph, xb, sb, rounds).unwrap();
        let mut moves = [0u64; 2];
        let mut prev = (sa, sb);
        for (i, &(pa, pb)) in trace.positions.iter().enumerate() {
            let round = i as u64 + 1;
            prop_assert_eq!(pa, solo_a.positions[i]);
            let expected_b = if round < tau { sb } else { solo_b.positions[(round - tau) as usize] };
            prop_assert_eq!(pb, expected_b);
            moves[0] += u64::from(pa != prev.0);
            moves[1] += u64::from(pb != prev.1);
            prev = (pa, pb);
        }
        prop_assert_eq!(moves, trace.traversals);
        prop_assert_eq!(trace.cost, moves[0] + moves[1]);
    }
}

#[test]
fn fast_schedules_differ_early() {
    for n in [3, 5, 8] {
        let plan = Arc::new(ring_plan(n).unwrap());
        let e = plan.budget() as u64;
        let procedure = Procedure::Plan(plan);
        let space = 40;
        let schedules: Vec<_> = (1..=space)
            .map(|l| Algorithm::Fast.compile_with(Label::new(l).unwrap(), space, &procedure).unwrap())
            .collect();
        for x in 1..=space {
            for y in x + 1..=space {
                let m = modified_label(Label::new(x).unwrap()).len() as u64;
                let horizon = (2 * m + 1) * e;
                let differs = (1..=horizon).any(|r| {
                    let moving = |l: u64| !matches!(schedules[l as usize - 1].action_at(r), ScheduleAction::Wait);
                    moving(x) != moving(y)
                });
                assert!(differs, "labels {x} and {y} on ring {n}");
            }
        }
    }
}
