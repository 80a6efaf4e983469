use callrecency::mining::ContextAttribute::{self, *};
use callrecency::recency::mine_week;
use callrecency::{
    aggregate_recent, build_segments, conflict_score, context_precedence, detect_boundary,
    dominant_behavior, entropy, generate_associations, information_gain, parse_log, split_by_week,
    write_log, BehaviorClass, BehaviorDistribution, CallRecord, CallType, ColumnMapping,
    ConflictScore, ContextAssociation, Contextual, WeekDataset,
};
use chrono::{Duration, NaiveDate, NaiveDateTime};
use proptest::prelude::*;

#[derive(Debug, Clone)]
struct Row {
    values: [String; 4],
    behavior: BehaviorClass,
}

impl Contextual for Row {
    fn context_value(&self, attribute: ContextAttribute) -> &str {
        let i = ContextAttribute::DEFAULT_ORDER
            .iter()
            .position(|&a| a == attribute)
            .unwrap();
        &self.values[i]
    }

    fn behavior(&self) -> BehaviorClass {
        self.behavior
    }
}

fn behavior() -> impl Strategy<Value = BehaviorClass> {
    (0usize..4).prop_map(|i| BehaviorClass::ALL[i])
}

fn row() -> impl Strategy<Value = Row> {
    ([0u8..3, 0u8..2, 0u8..4, 0u8..3], behavior()).prop_map(|(v, behavior)| Row {
        values: v.map(|x| format!("v{x}")),
        behavior,
    })
}

fn rows(max: usize) -> impl Strategy<Value = Vec<Row>> {
    prop::collection::vec(row(), 1..max)
}

fn distribution() -> impl Strategy<Value = BehaviorDistribution> {
    prop::array::uniform4(0u64..50)
        .prop_filter("non-empty", |c| c.iter().sum::<u64>() > 0)
        .prop_map(BehaviorDistribution::from_counts)
}

fn week(index: u32, records: Vec<Row>) -> WeekDataset<Row> {
    let start = NaiveDate::from_ymd_opt(2004, 9, 6)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    WeekDataset {
        index,
        start,
        end: start + Duration::days(7),
        partial: false,
        records,
    }
}

proptest! {
    #[test]
    fn entropy_is_bounded_and_label_blind(d in distribution(), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
        let h = entropy(&d).unwrap();
        prop_assert!((0.0..=2.0 + 1e-12).contains(&h));
        let c = d.counts();
        let permuted = BehaviorDistribution::from_counts([c[perm[0]], c[perm[1]], c[perm[2]], c[perm[3]]]);
        prop_assert!((entropy(&permuted).unwrap() - h).abs() < 1e-12);
    }

    #[test]
    fn dominant_has_maximal_count(d in distribution()) {
        let top = dominant_behavior(&d).unwrap();
        for c in BehaviorClass::ALL {
            prop_assert!(d.count(top) >= d.count(c));
            if d.count(c) == d.count(top) {
                prop_assert!(top <= c);
            }
        }
    }

    #[test]
    fn gain_is_between_zero_and_entropy(records in rows(40)) {
        let whole: BehaviorDistribution = records.iter().map(|r| r.behavior).collect();
        let h = entropy(&whole).unwrap();
        for a in ContextAttribute::DEFAULT_ORDER {
            let g = information_gain(&records, a).unwrap();
            prop_assert!(g >= -1e-9 && g <= h + 1e-9, "gain {} entropy {}", g, h);
        }
    }

    #[test]
    fn precedence_is_a_permutation(records in rows(30), attrs in Just(ContextAttribute::DEFAULT_ORDER.to_vec()).prop_shuffle()) {
        let mut order = context_precedence(&records, &attrs).unwrap();
        let gains: Vec<f64> = order.iter().map(|&a| information_gain(&records, a).unwrap()).collect();
        prop_assert!(gains.windows(2).all(|w| w[0] >= w[1]));
        order.sort();
        let mut sorted = attrs.clone();
        sorted.sort();
        prop_assert_eq!(order, sorted);
    }

    #[test]
    fn association_levels_partition_records(records in rows(40), attrs in Just(ContextAttribute::DEFAULT_ORDER.to_vec()).prop_shuffle()) {
        let table = generate_associations(&records, &attrs, 1).unwrap();
        for k in 1..=attrs.len() {
            let total: u64 = table.iter().filter(|(a, _)| a.len() == k).map(|(_, d)| d.total()).sum();
            prop_assert_eq!(total, records.len() as u64);
        }
        for (assoc, dist) in &table {
            prop_assert_eq!(assoc.len() <= attrs.len(), true);
            let matching: BehaviorDistribution = records.iter().filter(|r| assoc.matches(*r)).map(|r| r.behavior).collect();
            prop_assert_eq!(*dist, matching);
            if assoc.len() < attrs.len() {
                let refined = table
                    .iter()
                    .filter(|(b, _)| b.len() == assoc.len() + 1 && assoc.is_subset_of(b))
                    .fold(BehaviorDistribution::new(), |acc, (_, d)| acc + *d);
                prop_assert_eq!(refined, *dist);
            }
        }
    }

    #[test]
    fn support_filter_only_removes(records in rows(40), k in 1u64..6) {
        let all = generate_associations(&records, &[Location, Relationship], 1).unwrap();
        let kept = generate_associations(&records, &[Location, Relationship], k).unwrap();
        for (a, d) in &all {
            prop_assert_eq!(kept.contains_key(a), d.total() >= k);
        }
    }

    #[test]
    fn conflict_score_is_symmetric(a in rows(40), b in rows(40), k in 1u64..4) {
        let attrs = ContextAttribute::DEFAULT_ORDER;
        let ab = conflict_score(&week(2, a.clone()), &week(1, b.clone()), &attrs, k).unwrap();
        let ba = conflict_score(&week(2, b), &week(1, a), &attrs, k).unwrap();
        prop_assert_eq!((ab.shared, ab.conflicts, ab.score), (ba.shared, ba.conflicts, ba.score));
        prop_assert!(ab.conflicts <= ab.shared);
        if let Some(s) = ab.score {
            prop_assert!((0.0..=100.0).contains(&s));
        }
    }

    #[test]
    fn week_against_its_copy_scores_zero(a in rows(40), k in 1u64..4) {
        let attrs = ContextAttribute::DEFAULT_ORDER;
        let s = conflict_score(&week(2, a.clone()), &week(1, a.clone()), &attrs, k).unwrap();
        if mine_week(&a, &attrs, k).unwrap().is_empty() {
            prop_assert_eq!(s.score, None);
        } else {
            prop_assert_eq!(s.score, Some(0.0));
        }
    }

    #[test]
    fn lower_threshold_never_lengthens_window(
        scores in prop::collection::vec(prop::option::weighted(0.9, 0.0f64..=100.0), 1..12),
        t1 in 0.0f64..=100.0,
        t2 in 0.0f64..=100.0,
    ) {
        let n = scores.len() as u32 + 1;
        let series: Vec<ConflictScore> = scores
            .iter()
            .enumerate()
            .map(|(k, &score)| ConflictScore {
                newer: n - k as u32,
                older: n - k as u32 - 1,
                shared: 1,
                conflicts: 0,
                score,
                newer_only: 0,
                older_only: 0,
            })
            .collect();
        let weeks: Vec<WeekDataset<Row>> = (1..=n).map(|i| week(i, Vec::new())).collect();
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let recent = |t: f64| aggregate_recent(&weeks, series.clone(), detect_boundary(&series, t)).unwrap().recent_weeks;
        prop_assert!(recent(lo) <= recent(hi));
    }

    #[test]
    fn split_then_aggregate_keeps_every_record(minutes in prop::collection::vec(0i64..60 * 24 * 60, 1..150), cut in 0usize..10) {
        let base = NaiveDate::from_ymd_opt(2004, 9, 6).unwrap().and_hms_opt(0, 0, 0).unwrap();
        let mut records: Vec<CallRecord> = minutes
            .iter()
            .map(|&m| CallRecord::new(base + Duration::minutes(m), CallType::Missed, 0, "a", "b", "c"))
            .collect();
        records.sort_by_key(|r| r.timestamp);
        let weeks = split_by_week(records.clone()).unwrap();
        for w in &weeks {
            for r in &w.records {
                prop_assert!(w.start <= r.timestamp && r.timestamp < w.end);
            }
        }
        let n = weeks.len() as u32;
        let boundary = (n >= 2).then(|| {
            let i = 2 + (cut as u32 % (n - 1));
            (i, i - 1)
        });
        let result = aggregate_recent(&weeks, Vec::new(), boundary).unwrap();
        let expected: usize = weeks
            .iter()
            .filter(|w| boundary.is_none_or(|(i, _)| w.index >= i))
            .map(|w| w.records.len())
            .sum();
        prop_assert_eq!(result.recent_records.len(), expected);
        let ts: Vec<NaiveDateTime> = result.recent_records.iter().map(|r| r.timestamp).collect();
        prop_assert!(ts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn segments_partition_every_day(minutes in prop::collection::vec((0i64..7 * 24 * 60, 0usize..4), 0..80), slot_idx in 0usize..5) {
        let slot = [15u32, 30, 60, 120, 240][slot_idx];
        let base = NaiveDate::from_ymd_opt(2004, 9, 6).unwrap().and_hms_opt(0, 0, 0).unwrap();
        let records: Vec<CallRecord> = minutes
            .iter()
            .map(|&(m, b)| {
                let (t, d) = [(CallType::Incoming, 5), (CallType::Incoming, 0), (CallType::Missed, 0), (CallType::Outgoing, 3)][b];
                CallRecord::new(base + Duration::minutes(m), t, d, "a", "b", "c")
            })
            .collect();
        let seg = build_segments(&records, slot).unwrap();
        let total: u32 = seg.segments().iter().map(|s| s.end - s.start).sum();
        prop_assert_eq!(total, 7 * 1440);
        for w in seg.segments().windows(2) {
            if w[0].day == w[1].day {
                prop_assert_eq!(w[0].end, w[1].start);
                prop_assert_ne!(w[0].slot_label, w[1].slot_label);
            } else {
                prop_assert_eq!(w[0].end, 1440);
                prop_assert_eq!(w[1].start, 0);
            }
        }
        for r in &records {
            let s = seg.assign(&r.timestamp);
            prop_assert_eq!(s, callrecency::assign_segment(seg.segments(), &r.timestamp).unwrap());
        }
    }

    #[test]
    fn csv_round_trip(entries in prop::collection::vec(
        (0i64..100_000, 0usize..3, 0u32..3000, "[a-z ,\"]{0,8}", "[a-z]{1,6}", "[a-z0-9]{0,5}"), 1..30)
    ) {
        let base = NaiveDate::from_ymd_opt(2004, 9, 6).unwrap().and_hms_opt(0, 0, 0).unwrap();
        let mut records: Vec<CallRecord> = entries
            .iter()
            .map(|(m, t, d, loc, rel, id)| {
                let t = [CallType::Incoming, CallType::Missed, CallType::Outgoing][*t];
                CallRecord::new(base + Duration::minutes(*m), t, *d, loc.as_str(), rel.as_str(), id.as_str())
            })
            .collect();
        records.sort_by_key(|r| r.timestamp);
        let mut buf = Vec::new();
        write_log(&mut buf, &records).unwrap();
        let parsed = parse_log(buf.as_slice(), &ColumnMapping::default()).unwrap();
        prop_assert!(parsed.malformed.is_empty());
        prop_assert_eq!(parsed.records, records);
    }
}

#[test]
fn associations_are_comparable_across_precedences() {
    let r = |l: &str, rel: &str, b| Row {
        values: ["s".into(), "d".into(), l.into(), rel.into()],
        behavior: b,
    };
    let records = vec![
        r("office", "boss", BehaviorClass::Reject),
        r("office", "boss", BehaviorClass::Reject),
        r("home", "mother", BehaviorClass::Accept),
    ];
    let a = generate_associations(&records, &[Location, Relationship], 1).unwrap();
    let b = generate_associations(&records, &[Relationship, Location], 1).unwrap();
    let full = ContextAssociation::new([(Relationship, "boss"), (Location, "office")]).unwrap();
    assert_eq!(a[&full], b[&full]);
}
