use curvlab_core::report::{self, Format, Record, Report};
use curvlab_core::runner::{self, Command, ConfigFile, RunConfig};
use proptest::prelude::*;

fn cfg(toml: &str) -> RunConfig {
    RunConfig::from_file(ConfigFile::parse(toml).unwrap()).unwrap()
}

#[test]
fn config_file_and_overrides() {
    let file = ConfigFile::parse("command = \"classify\"\nmanifold = \"hopf-conformal\"\nseed = 5\nt = 0.1\ngrid = 12\nformat = \"records\"\n").unwrap();
    let cli = ConfigFile { seed: Some(7), ..Default::default() };
    let c = RunConfig::from_file(file.overlay(cli)).unwrap();
    assert_eq!(c.command, Command::Classify);
    assert_eq!(c.seed, 7);
    assert_eq!(c.format, Format::Records);
    let spec = c.manifold.unwrap();
    assert_eq!(spec.params.t, 0.1);
    assert_eq!(spec.params.grid, Some(12));
}

#[test]
fn config_errors() {
    assert!(ConfigFile::parse("colour = 1").is_err());
    for bad in [
        "command = \"fly\"",
        "command = \"classify\"",
        "command = \"classify\"\nmanifold = \"sphere\"",
        "command = \"ahat\"\nchern = \"c2=24\"",
        "command = \"ahat\"\ndim = 4",
        "command = \"check-identities\"\nmanifold = \"torus-flat\"\nderivative = \"symbolic\"",
        "command = \"check-identities\"\nmanifold = \"torus-flat\"\ntol-identity = -1.0",
        "command = \"lebrun-table\"\nkappa = \"3\"",
    ] {
        let r = ConfigFile::parse(bad).and_then(RunConfig::from_file);
        assert!(r.is_err(), "{bad}");
        assert_eq!(runner::exit_code_for(&r.unwrap_err()), runner::EXIT_CONFIG);
    }
}

#[test]
fn numbers_table_feeds_ahat() {
    let c = cfg("command = \"ahat\"\ndim = 4\nspin = true\n[numbers]\n\"c1^2\" = \"0\"\nc2 = \"24\"\n");
    let (code, rep) = runner::run(&c);
    assert_eq!(code, 0);
    assert_eq!(rep.verdicts[0], "A-hat = 2");
    let c = cfg("command = \"ahat\"\ndim = 4\n[numbers]\n\"c1^2\" = \"0\"\nc2 = \"0\"\n");
    assert_eq!(runner::run(&c).1.verdicts[0], "A-hat = 0");
}

#[test]
fn exit_codes() {
    let ok = cfg("command = \"check-identities\"\nmanifold = \"torus-flat\"\npoints = 5");
    assert_eq!(runner::run(&ok).0, runner::EXIT_PASS);
    let fail = cfg("command = \"check-identities\"\nmanifold = \"torus-kahler-potential\"\npoints = 5\ntol-identity = 1e-300");
    let (code, rep) = runner::run(&fail);
    assert_eq!(code, runner::EXIT_CHECK_FAILED);
    assert!(!rep.passed());
    let stuck = cfg("command = \"gauduchon\"\nmanifold = \"hopf-conformal\"\nsolver-iterations = 1");
    assert_eq!(runner::run(&stuck).0, runner::EXIT_NONCONVERGENCE);
    let pd = cfg("command = \"classify\"\nmanifold = \"torus-kahler-potential\"\namplitude = 50.0");
    assert_eq!(runner::run(&pd).0, runner::EXIT_CONFIG);
    let unsupported = cfg("command = \"yamabe\"\nmanifold = \"inoue-chart\"");
    assert_eq!(runner::run(&unsupported).0, runner::EXIT_CONFIG);
}

#[test]
fn report_written_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.jsonl");
    let mut c = cfg("command = \"lebrun-table\"\nformat = \"records\"");
    c.out = Some(path.clone());
    let (code, rep) = runner::run(&c);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(report::parse_records(&text).unwrap(), rep.records);
    c.out = Some(dir.path().join("missing").join("r.jsonl"));
    assert_eq!(runner::run(&c).0, runner::EXIT_CONFIG);
}

#[test]
fn empty_report_is_header_only() {
    let rep = Report::new("noop");
    assert!(rep.passed());
    let text = report::emit(&rep, Format::Text);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("check"));
    assert_eq!(report::emit(&rep, Format::Records), "");
}

#[test]
fn one_failure_fails_the_report() {
    let mut rep = Report::new("x");
    rep.push(Record::within("a", "m", 1.0, 0.0, 1e-6));
    rep.push(Record::within("b", "m", 1.0, 1.0, 1e-6));
    assert!(!rep.passed());
    assert!(!Record::within("nan", "m", 1.0, f64::NAN, 1.0).pass);
}

#[test]
fn records_mode_is_deterministic() {
    let c = cfg("command = \"adjoints\"\nmanifold = \"torus-hermitian-perturbed\"\ntriples = 2\nsequential = true\nformat = \"records\"\nseed = 11");
    let a = report::emit(&runner::run(&c).1, Format::Records);
    let b = report::emit(&runner::run(&c).1, Format::Records);
    assert_eq!(a, b);
}

fn arb_f64() -> impl Strategy<Value = Option<f64>> {
    prop_oneof![
        Just(None),
        any::<f64>().prop_map(Some),
        (-1e3f64..1e3).prop_map(Some),
    ]
}

proptest! {
    #[test]
    fn records_round_trip(v in arb_f64(), r in arb_f64(), t in arb_f64(), pass: bool, check in "[a-z.\\[\\]0-9\"\\\\ ]{1,12}") {
        let mut rep = Report::new("x");
        rep.push(Record { check, manifold: "torus-flat".into(), value: v, residual: r, tol: t, pass, note: Some("A-hat = -1/8".into()) });
        let back = report::parse_records(&report::emit(&rep, Format::Records)).unwrap();
        let norm = |x: Option<f64>| x.filter(|v| v.is_finite());
        prop_assert_eq!(back.len(), 1);
        let b = &back[0];
        prop_assert_eq!(b.value.map(f64::to_bits), norm(v).map(f64::to_bits));
        prop_assert_eq!(b.residual.map(f64::to_bits), norm(r).map(f64::to_bits));
        prop_assert_eq!(b.tol.map(f64::to_bits), norm(t).map(f64::to_bits));
        prop_assert_eq!(&b.check, &rep.records[0].check);
        prop_assert_eq!(b.pass, pass);
    }
}
