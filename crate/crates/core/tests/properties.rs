use proptest::prelude::*;

use orient_tw::algorithms::{solve_auto, solve_integer_endpoints, zero_window_dp, SolverContext};
use orient_tw::brute::brute_force_opt;
use orient_tw::decomposition::{dyadic_family, dyadic_partition, length_bands, three_split_ceil};
use orient_tw::generate::{generate_instance, Family, GenSpec};
use orient_tw::instance::{scale_times, TimeWindow};
use orient_tw::io::{parse_instance, serialize_instance};
use orient_tw::metric::{metric_closure, Graph};
use orient_tw::modular::{partition_by_windows, solve_exact_pareto, solve_reward_indexed};
use orient_tw::oracles::ExactOrienteering;
use orient_tw::rational::{frac, int};
use orient_tw::{evaluate_walk, TwInstance};

fn family() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::ALL.to_vec())
}

fn instance(max_len: i128, grain: i128) -> impl Strategy<Value = TwInstance> {
    (family(), 3usize..=7, any::<u64>(), any::<bool>()).prop_map(move |(f, n, seed, anchored)| {
        let spec = GenSpec {
            l_lo: int(1),
            l_hi: int(max_len),
            horizon: int(max_len + 4),
            grain,
            max_reward: 3,
            anchored,
            ..GenSpec::new(f, n, seed)
        };
        generate_instance(&spec).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_satisfies_triangle_inequality(
        directed in any::<bool>(),
        edges in prop::collection::vec((0usize..6, 0usize..6, 0i128..10), 0..15),
    ) {
        let mut g = Graph::new(directed, 6);
        for (u, v, w) in edges {
            g.add_edge(u, v, int(w));
        }
        let m = metric_closure(&g).unwrap();
        prop_assert!(m.satisfies_triangle_inequality());
        prop_assert_eq!(metric_closure(&m.to_graph()).unwrap(), m);
    }

    #[test]
    fn dyadic_pieces_tile(a in -100i128..100, len in 1i128..300) {
        let pieces = dyadic_partition(a, a + len).unwrap();
        prop_assert_eq!(pieces.first().unwrap().lo, a);
        prop_assert_eq!(pieces.last().unwrap().hi, a + len);
        for p in pieces.windows(2) {
            prop_assert_eq!(p[0].hi, p[1].lo);
        }
    }

    #[test]
    fn families_cover_and_restrict(x in instance(8, 2)) {
        three_split_ceil(&x).unwrap().verify().unwrap();
        length_bands(&x).unwrap().verify().unwrap();
    }

    #[test]
    fn dyadic_family_covers(x in instance(8, 1)) {
        dyadic_family(&x).unwrap().verify().unwrap();
    }

    #[test]
    fn serialization_round_trips(x in instance(6, 4)) {
        prop_assert_eq!(parse_instance(&serialize_instance(&x)).unwrap(), x);
    }

    #[test]
    fn optimum_is_scale_invariant(x in instance(4, 2), num in 1i128..5, den in 1i128..5) {
        let y = scale_times(&x, &frac(num, den)).unwrap();
        prop_assert_eq!(brute_force_opt(&x).unwrap().reward, brute_force_opt(&y).unwrap().reward);
    }

    #[test]
    fn reward_indexed_matches_pareto(x in instance(6, 1), cut in 1i128..4) {
        // blocks of identical unit windows on a coarse grid
        let mut x = x;
        for v in x.active() {
            let r = (x.windows[v].release / int(cut)).floor() * int(cut);
            x.windows[v] = TimeWindow::of(r, r + int(cut));
        }
        let p = partition_by_windows(&x);
        let a = solve_reward_indexed(&x, &p, &ExactOrienteering).unwrap();
        let b = solve_exact_pareto(&x, &p).unwrap();
        prop_assert_eq!(a.reward, b.reward);
        prop_assert_eq!(a.reward, brute_force_opt(&x).unwrap().reward);
    }

    #[test]
    fn point_window_dp_is_exact(x in instance(3, 2), times in prop::collection::vec(0i128..16, 7)) {
        let mut x = x;
        for v in x.active() {
            let t = frac(times[v], 2);
            x.windows[v] = TimeWindow::of(t, t);
        }
        prop_assert_eq!(zero_window_dp(&x).unwrap().reward, brute_force_opt(&x).unwrap().reward);
    }

    #[test]
    fn reported_walks_re_evaluate(x in instance(6, 2)) {
        let r = solve_auto(&x, &SolverContext::default()).unwrap();
        let again = evaluate_walk(&x, &r.walk.order(), None).unwrap();
        prop_assert_eq!(again.reward, r.walk.reward);
        prop_assert!(r.walk.reward <= brute_force_opt(&x).unwrap().reward);
    }
}

/// Window lengths two can need three dyadic versions: `[0, 2]` is one
/// level-1 piece while `[1, 3]` splits into two unit pieces, so the best
/// version keeps a third of the optimum, below the half promised by
/// `2 ceil(log2 L_max)`.
#[test]
fn dyadic_versions_can_exceed_two_log_l() {
    let mut g = Graph::new(false, 4);
    // 0 = start, co-located with a = 1; b = 2, c = 3
    g.add_edge(0, 1, int(0)).add_edge(1, 2, int(3)).add_edge(2, 3, int(1));
    let m = metric_closure(&g).unwrap();
    let windows = vec![TimeWindow::of(int(0), int(9)), TimeWindow::of(int(0), int(2)), TimeWindow::of(int(1), int(3)), TimeWindow::of(int(4), int(5))];
    let mut x = TwInstance::free(m, windows, int(9)).unwrap();
    x.start = Some(0);
    x.rewards[0] = int(0);
    assert_eq!(brute_force_opt(&x).unwrap().reward, int(3));
    let family = dyadic_family(&x).unwrap();
    assert_eq!(family.beta(), 3);
    for (_, v) in &family.versions {
        assert_eq!(brute_force_opt(v).unwrap().reward, int(1));
    }
    assert_eq!(solve_integer_endpoints(&x, &SolverContext::default()).unwrap().walk.reward, int(1));
}
