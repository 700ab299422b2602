use prodist::instance_file::{instance_to_json, load_instance};
use prodist::result_doc::{trace_to_csv, ResultDoc};
use prodist_core::oracle::random_tiny_instance;
use prodist_core::scenario::{build_scenario, ScenarioName};
use prodist_core::{solve, Matrix, NetworkInstance, SolverConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn positive() -> impl Strategy<Value = f64> {
    prop_oneof![1e-6f64..1e9, (1u32..100_000).prop_map(f64::from)]
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(0.0f64..1e6, rows * cols)
        .prop_map(move |data| Matrix::from_vec(rows, cols, data).unwrap())
}

fn instance() -> impl Strategy<Value = NetworkInstance> {
    (1usize..4, 1usize..4, 1usize..4, 1usize..5).prop_flat_map(|(s, k, j, i)| {
        (
            proptest::collection::vec(positive(), s),
            proptest::collection::vec(positive(), k),
            proptest::collection::vec(positive(), j),
            proptest::collection::vec(0.0f64..1e5, i),
            proptest::collection::vec(0.0f64..1e3, s),
            proptest::collection::vec(0.0f64..1e3, j),
            matrix(k, j),
            matrix(j, i),
            positive(),
            any::<bool>(),
        )
            .prop_map(move |(sc, pc, dc, d, rc, hc, pdc, drc, u, strict)| NetworkInstance {
                num_suppliers: s,
                num_plants: k,
                num_dcs: j,
                num_retailers: i,
                supplier_capacity: sc,
                plant_capacity: pc,
                dc_capacity: dc,
                demand: d,
                raw_unit_cost: rc,
                holding_unit_cost: hc,
                plant_dc_unit_cost: pdc,
                dc_retailer_unit_cost: drc,
                utilization: u,
                strict_per_dc: strict,
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn emitted_instance_reloads_equal(inst in instance()) {
        prop_assert_eq!(load_instance(&instance_to_json(&inst)).unwrap(), inst);
    }

    #[test]
    fn result_document_is_canonical(seed in any::<u64>(), pick in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_tiny_instance(&mut rng);
        let inst = match pick {
            0 => build_scenario(ScenarioName::Baseline).synthetic_instance(),
            _ => inst,
        };
        let result = solve(&inst, &SolverConfig { seed, max_generations: 10, ..Default::default() }).unwrap();
        let first = ResultDoc::from(&result).to_json();
        let again = ResultDoc::from_json(&first).unwrap().to_json();
        prop_assert_eq!(first, again);
    }
}

#[test]
fn trace_has_one_row_per_generation() {
    let inst = build_scenario(ScenarioName::Baseline).synthetic_instance();
    let config = SolverConfig {
        seed: 3,
        stall_generations: 0,
        ..Default::default()
    };
    let result = solve(&inst, &config).unwrap();
    let csv = trace_to_csv(&result.trace);
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["generation", "best_feasible_cost", "mean_cost", "min_violation", "feasible_count"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 200);
    let best: Vec<f64> = rows
        .iter()
        .filter(|r| !r[1].is_empty())
        .map(|r| r[1].parse().unwrap())
        .collect();
    assert!(!best.is_empty());
    assert!(best.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn infeasible_trace_leaves_cost_empty() {
    let mut inst = build_scenario(ScenarioName::Baseline).synthetic_instance();
    inst.demand.iter_mut().for_each(|d| *d *= 3.0);
    let result = solve(
        &inst,
        &SolverConfig {
            seed: 4,
            max_generations: 50,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(result.best_feasible.is_none());
    let csv = trace_to_csv(&result.trace);
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    let violations: Vec<f64> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            assert!(r[1].is_empty());
            r[3].parse().unwrap()
        })
        .collect();
    assert!(violations.iter().all(|&v| v > 0.0));
    assert!(violations.windows(2).all(|w| w[1] <= w[0]), "{violations:?}");
}
