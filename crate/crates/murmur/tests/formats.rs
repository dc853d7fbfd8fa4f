use murmur::config::{parse_ratio, Preset, RunConfig};
use murmur::output::{read_csv, write_csv, CsvRow};
use murmur_core::murmur::ComparisonRow;
use murmur_core::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratio_display_round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
        let r = Ratio::new(n, d);
        prop_assert_eq!(parse_ratio(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn csv_is_lossless(rows in prop::collection::vec(prop::array::uniform5(-1e12f64..1e12), 0..20)) {
        let rows: Vec<ComparisonRow> = rows
            .iter()
            .map(|r| ComparisonRow::new(r[0].abs(), Complex64::new(r[1], r[2]), Complex64::new(r[3], r[4])))
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        write_csv(std::fs::File::create(&path).unwrap(), &rows).unwrap();
        let back = read_csv(&path).unwrap();
        let want: Vec<CsvRow> = rows.iter().map(CsvRow::from).collect();
        prop_assert_eq!(back, want);
    }

    #[test]
    fn config_json_round_trips(d0 in 1.0f64..1e6, w in 1.0f64..1e5, points in 1usize..100) {
        let mut c = RunConfig::preset(Preset::Fig1Desk);
        c.family.d0 = d0;
        c.family.d1 = d0 + w;
        c.sweep.points = points;
        let text = serde_json::to_string(&c).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_value(&back).unwrap(), serde_json::to_value(&c).unwrap());
    }
}
