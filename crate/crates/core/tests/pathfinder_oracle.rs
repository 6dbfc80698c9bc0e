//! Dijkstra schedules against a Bellman-Ford oracle, plus path shapes on real landscapes.

use proptest::prelude::*;

use qcat::optimize::linspace;
use qcat::pathfinder::{
    schedule_for_spin, shortest_schedule, EdgeConvention, GraphOptions, ScheduleGraph,
    SENTINEL_COST,
};
use qcat::spinspace::TwiceSpin;
use qcat::Exec;

/// Plain Bellman-Ford over the same edge weights.
fn bellman_ford(g: &ScheduleGraph) -> f64 {
    let (ng, nk) = g.shape();
    let idx = |c: (usize, usize)| c.0 * nk + c.1;
    let mut dist = vec![f64::INFINITY; ng * nk];
    dist[idx(g.start)] = 0.0;
    for _ in 0..ng * nk {
        let mut changed = false;
        for a in 0..ng {
            for b in 0..nk {
                let from = (a, b);
                if !dist[idx(from)].is_finite() {
                    continue;
                }
                for to in g.neighbors(from) {
                    let w = g.edge_weight(from, to).unwrap();
                    let d = dist[idx(from)] + w;
                    if d < dist[idx(to)] {
                        dist[idx(to)] = d;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist[idx(g.goal)]
}

fn convention() -> impl Strategy<Value = EdgeConvention> {
    prop_oneof![
        Just(EdgeConvention::Destination),
        Just(EdgeConvention::Source),
        Just(EdgeConvention::Average)
    ]
}

proptest! {
    #[test]
    fn dijkstra_matches_bellman_ford(
        (n, m, gaps) in (2usize..7, 2usize..7).prop_flat_map(|(n, m)| {
            (Just(n), Just(m), proptest::collection::vec(prop_oneof![9 => 0.05f64..2.0, 1 => Just(0.0)], n * m))
        }),
        conv in convention(),
        j in 1.0f64..50.0,
    ) {
        let opts = GraphOptions { convention: conv, forced_kappa_one: false };
        let g = ScheduleGraph::from_gaps(&linspace(0.0, 1.0, n), &linspace(0.0, 1.0, m), &gaps, j, opts).unwrap();
        let p = shortest_schedule(&g).unwrap();
        let want = bellman_ford(&g);
        prop_assert!((p.total_time - want).abs() <= 1e-12 * want.max(1.0), "{} vs {}", p.total_time, want);
        // the reported path re-sums to the total and each step is a legal edge
        let mut sum = 0.0;
        for (w, pair) in p.cells.windows(2).enumerate() {
            sum += g.edge_weight(pair[0], pair[1]).unwrap();
            prop_assert_eq!(sum, p.cumulative[w + 1]);
        }
        prop_assert_eq!(p.cells[0], g.start);
        prop_assert_eq!(*p.cells.last().unwrap(), g.goal);
        let sentinel = p.cells.windows(2).filter(|w| g.edge_weight(w[0], w[1]) == Some(SENTINEL_COST)).count();
        prop_assert_eq!(sentinel, p.sentinel_steps);
    }

    #[test]
    fn forced_graph_never_leaves_kappa_one(n in 2usize..8, m in 2usize..8, j in 1.0f64..30.0) {
        let gaps: Vec<f64> = (0..n * m).map(|i| 0.1 + (i % 5) as f64 * 0.3).collect();
        let opts = GraphOptions { forced_kappa_one: true, ..GraphOptions::default() };
        let g = ScheduleGraph::from_gaps(&linspace(0.0, 1.0, n), &linspace(0.0, 1.0, m), &gaps, j, opts).unwrap();
        let p = shortest_schedule(&g).unwrap();
        prop_assert!(p.controls.iter().all(|c| c.kappa == 1.0));
        prop_assert_eq!(p.total_time, bellman_ford(&g));
    }
}

#[test]
fn small_spin_stays_on_kappa_one() {
    let p = schedule_for_spin(
        TwiceSpin::new(20),
        201,
        GraphOptions::default(),
        Exec::Parallel,
    )
    .unwrap();
    assert!(p.controls.iter().all(|c| c.kappa == 1.0));
    assert_eq!(p.sentinel_steps, 0);
}

#[test]
fn larger_spin_detours_and_returns() {
    let p = schedule_for_spin(
        TwiceSpin::new(80),
        201,
        GraphOptions::default(),
        Exec::Parallel,
    )
    .unwrap();
    let low = p.controls.iter().map(|c| c.kappa).fold(1.0, f64::min);
    assert!(low < 1.0, "j = 40 path never leaves kappa = 1");
    assert_eq!(p.controls.last().unwrap().kappa, 1.0);
    assert_eq!(p.controls.last().unwrap().gamma, 0.0);
    // the detour happens in the transition region, not at the ends
    let off: Vec<f64> = p
        .controls
        .iter()
        .filter(|c| c.kappa < 1.0)
        .map(|c| c.gamma)
        .collect();
    assert!(off.iter().all(|&g| g > 0.3 && g < 0.7), "{off:?}");
    let forced = schedule_for_spin(
        TwiceSpin::new(80),
        201,
        GraphOptions {
            forced_kappa_one: true,
            ..GraphOptions::default()
        },
        Exec::Parallel,
    )
    .unwrap();
    assert!(p.total_time <= forced.total_time);
}
