use std::process::{Command, Output};

fn idtsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idtsub"))
        .args(args)
        .env_remove("IDTSUB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn frechet_ell_prints_sqrt_two() {
    let o = idtsub(&["eval", "ell", "--family", "frechet", "--theta", "0.5", "--t", "1,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1.414214\n");
}

#[test]
fn copula_csv_is_deterministic() {
    let args = ["sample", "copula", "--family", "german-linear", "--dim", "3", "--n", "2", "--seed", "7"];
    let a = idtsub(&args);
    let b = idtsub(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "seed,stream,u1,u2,u3");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("7,1,"));
    for row in &lines[1..] {
        for u in row.split(',').skip(2) {
            let v: f64 = u.parse().unwrap();
            assert!(v > 0.0 && v < 1.0);
        }
    }
}

#[test]
fn seed_from_environment_and_flags_win() {
    let env = |seed: &str, extra: &[&str]| {
        let mut args = vec!["sample", "copula", "--family", "galambos", "--n", "3"];
        args.extend_from_slice(extra);
        Command::new(env!("CARGO_BIN_EXE_idtsub")).args(&args).env("IDTSUB_SEED", seed).output().unwrap()
    };
    let from_env = env("5", &[]);
    let from_flag = idtsub(&["sample", "copula", "--family", "galambos", "--n", "3", "--seed", "5"]);
    assert_eq!(from_env.stdout, from_flag.stdout);
    assert_eq!(env("9", &["--seed", "5"]).stdout, from_flag.stdout);
}

#[test]
fn config_file_mirrors_flags() {
    let dir = std::env::temp_dir().join(format!("idtsub-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    std::fs::write(&path, "# defaults\nfamily = frechet\ntheta = 0.5\nt = 1,1\n").unwrap();
    let p = path.to_str().unwrap();
    let o = idtsub(&["--config", p, "eval", "ell"]);
    assert_eq!(stdout(&o), "1.414214\n");
    // the flag overrides the file
    let o = idtsub(&["--config", p, "eval", "ell", "--theta", "0.8"]);
    assert_eq!(stdout(&o), format!("{:.6}\n", 2f64.powf(0.8)));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(idtsub(&["eval", "ell", "--family", "nope", "--t", "1"]).status.code(), Some(2));
    assert_eq!(idtsub(&["sample", "copula", "--bogus"]).status.code(), Some(2));
    assert_eq!(idtsub(&["sample", "copula", "--family", "galambos", "--dim", "1"]).status.code(), Some(2));
    assert_eq!(idtsub(&["eval", "ell", "--family", "frechet", "--theta", "2", "--t", "1"]).status.code(), Some(2));
    assert_eq!(idtsub(&["sample", "infdiv", "--law", "cp", "--family", "bondesson-5"]).status.code(), Some(2));
}

#[test]
fn families_list_has_every_family() {
    let o = idtsub(&["families", "list"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 13);
    assert!(text.contains("bondesson-45"));
}

#[test]
fn closed_suite_reports_json_and_csv() {
    let o = idtsub(&["verify", "--family", "german-exp", "--suite", "closed"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("\"overall_pass\": true"));
    assert!(text.contains("closed ell d=4"));
    let o = idtsub(&["verify", "--family", "german-exp", "--suite", "closed", "--format", "csv"]);
    assert!(stdout(&o).starts_with("check,statistic,threshold,pass,n,seed\n"));
}

#[test]
fn path_rows_end_at_horizon() {
    let o = idtsub(&["sample", "path", "--family", "standard-poisson", "--horizon", "3", "--sampler", "lepage", "--n", "2", "--seed", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    for stream in [0.0, 1.0] {
        let path: Vec<&Vec<f64>> = rows.iter().filter(|r| r[1] == stream).collect();
        assert_eq!(path.last().unwrap()[2], 3.0);
        // counting process: non-decreasing integer values
        assert!(path.windows(2).all(|w| w[1][3] >= w[0][3] && w[1][3].fract() == 0.0));
    }
}

#[test]
fn infdiv_rows() {
    let o = idtsub(&["sample", "infdiv", "--law", "bondesson", "--family", "bondesson-33", "--n", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("seed,stream,value,terms,exact"));
    assert_eq!(text.lines().count(), 5);
}
