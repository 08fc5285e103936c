use proptest::prelude::*;
use psrk::tableau::{eq2, eq3, family_tableau, gl4, rk4, ExactTableau, MethodKind, TableauError};
use psrk_harness::output::{fmt17, write_fit, write_series, write_table1, FIT_HEADER, TABLE1_HEADER};
use psrk_harness::{
    drift_experiment, fit_speeds, load_tableau, save_tableau, table1_report, DriftSpeedFit, HarnessError, Problem,
    SpeedPoint,
};

const RK4_FILE: &str = "\
# classical fourth-order method
s 4 explicit
c 0 1/2 1/2 1
a 0 0 0 0
a 1/2 0 0 0
a 0 1/2 0 0
a 0 0 1 0
b 1/6 1/3 1/3 1/6
";

fn read_csv(bytes: &[u8]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(bytes);
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn rk4_file_loads_exactly_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("classic.tab");
    std::fs::write(&path, RK4_FILE).unwrap();
    let tab = load_tableau(&path).unwrap();
    assert_eq!(tab.name(), "classic");
    assert_eq!((tab.stages(), tab.kind()), (4, MethodKind::Explicit));
    assert!(matches!(tab.exact(), Some(ExactTableau::Rational(_))));

    let again = dir.path().join("again.tab");
    save_tableau(&tab, &again).unwrap();
    let back = load_tableau(&again).unwrap();
    assert_eq!(back.exact(), tab.exact());
    assert_eq!(back.b(), tab.b());
    assert!(std::fs::read_to_string(&again).unwrap().contains("b 1/6 1/3 1/3 1/6"));
}

#[test]
fn float_tableaux_round_trip_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for tab in [gl4(), eq2(), eq3(), family_tableau(0.7).unwrap()] {
        let path = dir.path().join("m.tab");
        save_tableau(&tab, &path).unwrap();
        let back = load_tableau(&path).unwrap();
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(back.b()), bits(tab.b()));
        assert_eq!(bits(back.c()), bits(tab.c()));
        for (x, y) in back.a_rows().zip(tab.a_rows()) {
            assert_eq!(bits(x), bits(y));
        }
        assert_eq!(back.kind(), tab.kind());
    }
}

#[test]
fn row_two_violation_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tab");
    std::fs::write(&path, RK4_FILE.replace("a 1/2 0 0 0", "a 1/3 0 0 0")).unwrap();
    let err = load_tableau(&path).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    match &err {
        HarnessError::Tableau {
            source: TableauError::RowSum { row, .. },
            ..
        } => assert_eq!(*row, 2),
        other => panic!("unexpected {other}"),
    }
    let msg = err.to_string();
    assert!(msg.contains("bad.tab") && msg.contains("row 2"), "{msg}");
}

#[test]
fn missing_file_is_a_runtime_error() {
    let err = load_tableau("/nonexistent/CV8.tab").unwrap_err();
    assert!(matches!(err, HarnessError::Io { .. }));
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn series_csv_round_trips() {
    let series = drift_experiment(Problem::Rigid, &rk4(), 1.0 / 64.0, 10.0, 0.5).unwrap();
    let mut buf = Vec::new();
    write_series(&series, &mut buf).unwrap();
    let (header, rows) = read_csv(&buf);
    assert_eq!(header, ["t", "dQ1", "dQ2"]);
    assert_eq!(rows.len(), series.samples.len());
    for (row, sample) in rows.iter().zip(&series.samples) {
        let values: Vec<f64> = row.iter().map(|v| v.parse().unwrap()).collect();
        assert_eq!(values[0].to_bits(), sample.t.to_bits());
        for (v, d) in values[1..].iter().zip(&sample.deviations) {
            assert_eq!(v.to_bits(), d.to_bits());
        }
    }
    let mut again = Vec::new();
    write_series(&series, &mut again).unwrap();
    assert_eq!(buf, again);
}

#[test]
fn table_csv_has_one_row_per_available_method() {
    let rows = table1_report(None).unwrap();
    let mut buf = Vec::new();
    write_table1(&rows, &mut buf).unwrap();
    let (header, records) = read_csv(&buf);
    assert_eq!(header, TABLE1_HEADER);
    assert_eq!(records.len(), rows.iter().filter(|r| r.is_available()).count());
    let eq3 = records.iter().find(|r| r[0] == "eq3").unwrap();
    assert_eq!(&eq3[1..4], ["8", "4", "8"]);
    let t5: f64 = eq3[5].parse().unwrap();
    assert!(((t5 - 0.64048e-3) / 0.64048e-3).abs() < 1e-4);
    assert_eq!(eq3[11], "10");
    let gl4 = records.iter().find(|r| r[0] == "gl4").unwrap();
    assert_eq!(gl4[3], "inf");
    assert_eq!(gl4[11], "");
}

#[test]
fn external_method_files_fill_table_rows() {
    let dir = tempfile::tempdir().unwrap();
    // Any valid tableau stands in for an external method file.
    save_tableau(&rk4(), dir.path().join("AC36.tab")).unwrap();
    let rows = table1_report(Some(dir.path())).unwrap();
    let ac36 = rows.iter().find(|r| r.id == "AC36").unwrap();
    assert!(ac36.is_available());
    assert_eq!(ac36.analysis.as_ref().unwrap().name, "AC36");
    assert!(!rows.iter().find(|r| r.id == "CV8").unwrap().is_available());

    std::fs::write(dir.path().join("CV8.tab"), "s 2 sideways\n").unwrap();
    assert_eq!(table1_report(Some(dir.path())).unwrap_err().exit_code(), 2);
}

#[test]
fn empty_fit_is_header_only() {
    let fit = DriftSpeedFit {
        method: "rk4".into(),
        problem: Problem::Pendulum,
        t_end: 1.0,
        window: 0.1,
        points: vec![],
        estimate: fit_speeds(&[]),
    };
    let mut buf = Vec::new();
    write_fit(&fit, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", FIT_HEADER.join(",")));
}

#[test]
fn fit_csv_round_trips() {
    let points: Vec<_> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&h1| SpeedPoint::new(h1, 4.0 * h1, -h1.powi(5) / 3.0, 0.8))
        .collect();
    let fit = DriftSpeedFit {
        method: "rk4".into(),
        problem: Problem::Pendulum,
        t_end: 100.0,
        window: 10.0,
        estimate: fit_speeds(&points),
        points,
    };
    let mut buf = Vec::new();
    write_fit(&fit, &mut buf).unwrap();
    let (_, rows) = read_csv(&buf);
    for (row, p) in rows.iter().zip(&fit.points) {
        assert_eq!(row[2].parse::<f64>().unwrap().to_bits(), p.speed.to_bits());
        assert_eq!(row[4], p.floor.to_string());
    }
}

proptest! {
    #[test]
    fn seventeen_digits_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        prop_assert_eq!(fmt17(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}
