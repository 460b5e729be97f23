use proptest::prelude::*;

use rrobust::bench::{emit_csv, parse_csv, read_csv, to_csv_string, BenchRecord, RecordStatus};
use rrobust::compute::Method;
use rrobust::generators::{GraphModel, ModelParam};

fn arb_record() -> impl Strategy<Value = BenchRecord> {
    (
        prop::sample::select(GraphModel::ALL.to_vec()),
        2usize..64,
        0.0f64..=1.0,
        1usize..10,
        any::<u64>(),
        any::<u32>(),
        any::<bool>(),
        prop::option::of(0u32..32),
        0.0f64..1e7,
        any::<u64>(),
    )
        .prop_map(|(model, n, p, k, seed, trial, milp, r_max, elapsed_ms, search_count)| {
            BenchRecord {
                model,
                n,
                param: if model.uses_k() {
                    ModelParam::K(k)
                } else {
                    ModelParam::P(p)
                },
                seed,
                trial,
                method: if milp { Method::Milp } else { Method::Exhaustive },
                status: if r_max.is_some() {
                    RecordStatus::Ok
                } else {
                    RecordStatus::Timeout
                },
                r_max,
                elapsed_ms,
                search_count,
            }
        })
}

proptest! {
    #[test]
    fn csv_round_trip(records in prop::collection::vec(arb_record(), 0..20)) {
        let text = to_csv_string(&records);
        prop_assert_eq!(text.lines().count(), records.len() + 1);
        prop_assert_eq!(parse_csv(&text).unwrap(), records);
    }
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let recs = vec![BenchRecord {
        model: GraphModel::Kin,
        n: 9,
        param: ModelParam::K(4),
        seed: 12,
        trial: 3,
        method: Method::Exhaustive,
        r_max: Some(2),
        elapsed_ms: 0.125,
        search_count: 5000,
        status: RecordStatus::Ok,
    }];
    emit_csv(&path, &recs).unwrap();
    assert_eq!(read_csv(&path).unwrap(), recs);
}

#[test]
fn rejects_malformed_csv() {
    assert!(parse_csv("model,n\n").is_err());
    let header = "model,n,param,seed,trial,method,r_max,elapsed_ms,search_count,status\n";
    let err = parse_csv(&format!("{header}digraph,7,0.5,1,0,milp,x,1.0,3,ok\n")).unwrap_err();
    assert!(err.to_string().contains("line 2"), "{err}");
    assert!(parse_csv(&format!("{header}star,7,0.5,1,0,milp,1,1.0,3,ok\n")).is_err());
    let missing = std::path::Path::new("/nonexistent/dir/out.csv");
    let err = emit_csv(missing, &[]).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
}
