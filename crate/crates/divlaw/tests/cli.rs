use std::process::{Command, Output};

fn divlaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divlaw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows (comment and header lines dropped), split into cells.
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(o: &Output) -> String {
    stdout(o)
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .to_string()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn law_table_for_u_one_and_a_half() {
    let o = divlaw(&["law", "--u", "1.5", "--v-grid", "0:1:0.25"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(header(&o), "u,v,F_quad,F_closed");
    let r = rows(&o);
    assert_eq!(r.len(), 5);
    assert!(stdout(&o).starts_with("# divlaw law u=1.5 h=0.001 u_max=52"));
    for row in &r {
        let v = num(&row[1]);
        if v == 0.0 || v == 0.5 || v == 1.0 {
            assert!((num(&row[2]) - num(&row[3])).abs() <= 1e-6, "{row:?}");
        }
    }

    let closed = divlaw(&["closed", "--u", "1.5", "--v-grid", "0:1:0.25"]);
    assert_eq!(closed.status.code(), Some(0));
    assert_eq!(header(&closed), "u,v,piece,F_closed,F_reduced");
    for (a, b) in r.iter().zip(rows(&closed)) {
        assert!((num(&a[2]) - num(&b[4])).abs() <= 1e-6, "{a:?} {b:?}");
    }
}

#[test]
fn law_at_u_one_is_the_arcsine_law() {
    let o = divlaw(&["law", "--u", "1", "--v-grid", "0.25:0.25:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(header(&o), "u,v,F_quad");
    let r = rows(&o);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][2], "0.3333333333");
}

#[test]
fn law_rejects_small_u() {
    let o = divlaw(&["law", "--u", "0.5", "--v-grid", "0:1:0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--help"));
    let o = divlaw(&["law", "--u", "1.5", "--v-grid", "0:2:0.5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = divlaw(&["law", "--u", "1.5", "--v-grid", "0:1:0.5", "--h", "0.003"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn law_with_asymptotic_column_and_tolerance() {
    let o = divlaw(&["law", "--u", "4", "--v-grid", "0:1:0.5", "--asymptotic"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(header(&o), "u,v,F_quad,F_asymptotic");
    let o = divlaw(&[
        "law",
        "--u",
        "1.5",
        "--v-grid",
        "0.5:0.5:0.5",
        "--tolerance",
        "1e-6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = divlaw(&[
        "law",
        "--u",
        "1.5",
        "--v-grid",
        "0.25:0.25:0.25",
        "--tolerance",
        "1e-6",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn empirical_examples() {
    let o = divlaw(&[
        "empirical",
        "--x",
        "4",
        "--y",
        "2",
        "--v-grid",
        "0.5:0.5:0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(header(&o), "x,y,u,v,empirical,F_quad,abs_err");
    assert_eq!(rows(&o)[0][4], "0.7916666667");

    let o = divlaw(&["empirical", "--x", "30", "--y", "5", "--v-grid", "1:1:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&o)[0][4], "1.000000000");
}

#[test]
fn empirical_flag_errors() {
    let o = divlaw(&[
        "empirical",
        "--x",
        "1000000",
        "--x",
        "10",
        "--y",
        "5",
        "--v-grid",
        "1:1:1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = divlaw(&["empirical", "--x", "1000", "--v-grid", "1:1:1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = divlaw(&[
        "empirical",
        "--x",
        "200000000",
        "--y",
        "5",
        "--v-grid",
        "1:1:1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explicit_y_wins_over_u() {
    let o = divlaw(&[
        "empirical",
        "--x",
        "1000",
        "--y",
        "10",
        "--u",
        "1.5",
        "--v-grid",
        "0.5:0.5:0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r[0][1], "10.00000000");
    assert_eq!(r[0][2], "3.000000000");
    let o = divlaw(&[
        "empirical",
        "--x",
        "1000",
        "--u",
        "1.5",
        "--v-grid",
        "0.5:0.5:0.5",
    ]);
    assert_eq!(rows(&o)[0][1], "100.0000000");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "empirical",
        "--x",
        "20000",
        "--u",
        "1.5",
        "--v-grid",
        "0:1:0.05",
    ];
    let a = divlaw(&args);
    let b = divlaw(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let args = ["law", "--u", "2.5", "--v-grid", "0:1:0.1", "--asymptotic"];
    assert_eq!(divlaw(&args).stdout, divlaw(&args).stdout);
}

#[test]
fn compare_joins_columns() {
    let o = divlaw(&[
        "compare",
        "--x",
        "10000",
        "--u",
        "1.5",
        "--v-grid",
        "0:1:0.5",
        "--asymptotic",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        header(&o),
        "u,v,F_quad,F_closed,F_asymptotic,empirical,abs_err"
    );
    let r = rows(&o);
    assert_eq!(r.len(), 3);
    assert_eq!(r[2][5], "1.000000000");
}

#[test]
fn special_tables_and_out_file() {
    let dir = std::env::temp_dir().join(format!("divlaw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rho.csv");
    let o = divlaw(&[
        "special",
        "--function",
        "rho",
        "--w-grid",
        "0:3:1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# divlaw special function=rho"));
    assert_eq!(lines[1], "w,value");
    assert_eq!(lines[2], "0.000000000,1.000000000");
    assert_eq!(lines[4], "2.000000000,0.3068528194");
    std::fs::remove_dir_all(&dir).unwrap();

    let o = divlaw(&[
        "special",
        "--function",
        "rho-half",
        "--w-grid",
        "0.25:0.25:1",
    ]);
    assert_eq!(rows(&o)[0][1], "1.128379167");
    let o = divlaw(&["special", "--function", "omega", "--w-grid", "0.5:2.5:1"]);
    let r = rows(&o);
    assert_eq!(r[0][1], "0.000000000");
    assert_eq!(r[1][1], "0.6666666667");
    let o = divlaw(&["special", "--function", "rho-k", "--w-grid", "0:1:1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_filters_and_tolerance() {
    let o = divlaw(&["verify", "--only", "buchstab"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("buchstab"));
    assert_eq!(text.lines().filter(|l| l.contains(": PASS")).count(), 1);

    let o = divlaw(&["verify", "--only", "convolution"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("convolution ρ_half∗ρ_half=ρ: PASS (max_err"));

    let o = divlaw(&["verify", "--only", "buchstab", "--tolerance", "1e-20"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));

    let o = divlaw(&["verify", "--only", "nonsense"]);
    assert_eq!(o.status.code(), Some(1));
    let o = divlaw(&["verify", "--list"]);
    assert_eq!(stdout(&o).lines().count(), 12);
}

#[test]
fn help_and_unknown_command() {
    assert_eq!(divlaw(&["--help"]).status.code(), Some(0));
    assert_eq!(divlaw(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(divlaw(&[]).status.code(), Some(1));
}
