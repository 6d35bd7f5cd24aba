// Drives the command set in-process: a risk curve to CSV, then an SVG chart
// of it, in a temporary directory.

use shrinklab::cli;

pub fn run_example() -> (String, String) {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("risk.csv");
    let svg = dir.path().join("risk.svg");
    let code = cli::run([
        "shrinklab", "risk-curve", "--factor", "js", "--factor", "scad(lambda=1,alpha=3.7)", "--p", "5",
        "--nu", "0,1,4,9,16,25", "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(code, cli::EXIT_OK);
    let code = cli::run(["shrinklab", "plot", "--csv", csv.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(code, cli::EXIT_OK);
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    print!("{csv_text}");
    println!("svg: {} bytes", svg_text.len());
    (csv_text, svg_text)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
