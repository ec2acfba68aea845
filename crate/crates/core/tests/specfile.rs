//! TOML spec files.

use lieframe::catalog::all_entries;
use lieframe::specfile::{load_problem, SpecFile};

    
    const AXB: &str = r#"
name = "axb-file"
n_dim = 1
r_dim = 1
lambda = [1.0]
brackets = [[2, 1, 1, 1.0]]
"#;

    #[test]
    fn parses_minimal_file() {
        let p = SpecFile::parse(AXB).unwrap().into_problem().unwrap();
        assert_eq!(p.spec.c(1, 0, 0), 1.0);
        assert_eq!(p.spec.c(0, 1, 0), -1.0);
        assert!(p.spec.validate().is_valid());
    }

    #[test]
    fn conflicting_explicit_entries_break_antisymmetry() {
        let text = format!("{AXB}\n").replace("[[2, 1, 1, 1.0]]", "[[2, 1, 1, 1.0], [1, 2, 1, 1.0]]");
        let p = SpecFile::parse(&text).unwrap().into_problem().unwrap();
        assert!(!p.spec.validate().is_valid());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(SpecFile::parse(&format!("{AXB}\nbogus = 1\n")).is_err());
    }

#[test]
fn catalog_entries_round_trip_through_toml() {
    for e in all_entries().unwrap() {
        let text = SpecFile::from_problem(&e.problem).to_toml().unwrap();
        let back = SpecFile::parse(&text).unwrap().into_problem().unwrap();
        let (a, b) = (&e.problem, &back);
        assert_eq!(a.spec.n_dim(), b.spec.n_dim());
        assert_eq!(a.spec.r_dim(), b.spec.r_dim());
        let d = a.spec.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    assert!((a.spec.c(i, j, k) - b.spec.c(i, j, k)).abs() < 1e-14, "{} c[{i},{j},{k}]", e.id);
                }
            }
        }
        assert_eq!(a.lambda, b.lambda);
        assert_eq!(a.index_set, b.index_set);
        assert_eq!(a.domain, b.domain);
        assert_eq!(a.defaults, b.defaults);
        assert_eq!(a.haar.label(), b.haar.label(), "{}", e.id);
        assert_eq!(a.spec.h_solvable, b.spec.h_solvable);
    }
}

#[test]
fn load_problem_reads_files_and_ids() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("axb.toml");
    std::fs::write(&path, AXB).unwrap();
    let p = load_problem(path.to_str().unwrap()).unwrap();
    assert_eq!(p.name, "axb-file");
    assert_eq!(load_problem("heisenberg").unwrap().name, "heisenberg");
    assert!(load_problem("/no/such/file.toml").is_err());
}

#[test]
fn realization_overrides_must_agree() {
    let text = r#"
name = "axb-real"
n_dim = 1
r_dim = 1
lambda = [1.0]
brackets = [[2, 1, 1, 2.0]]

[realization]
size = 2
matrices = [[0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]
"#;
    assert!(SpecFile::parse(text).unwrap().into_problem().is_err());
    let ok = text.replace("2.0]]", "1.0]]");
    let p = SpecFile::parse(&ok).unwrap().into_problem().unwrap();
    assert_eq!(p.spec.c(1, 0, 0), 1.0);
}

#[test]
fn malformed_chart_sections_are_rejected() {
    for chart in [
        "[chart]\nindex_set = [0]\n",
        "[chart]\ndomain_lo = [-1.0]\n",
        "[chart]\nhaar = \"bogus\"\n",
        "[chart]\nhaar = \"catalog:nope\"\n",
    ] {
        let text = format!("{AXB}\n{chart}");
        assert!(SpecFile::parse(&text).and_then(|s| s.into_problem()).is_err(), "{chart}");
    }
    let wrong_lambda = AXB.replace("lambda = [1.0]", "lambda = [1.0, 2.0]");
    assert!(SpecFile::parse(&wrong_lambda).unwrap().into_problem().is_err());
}
