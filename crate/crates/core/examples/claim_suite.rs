//! Runs a few claims of the suite and prints the report table; pass claim ids
//! as arguments to choose others.

use twochart::claims::run_suite;

fn main() -> twochart::Result<()> {
    let mut ids: Vec<String> = std::env::args().skip(1).collect();
    if ids.is_empty() {
        ids = ["W1-rigidity", "W2-tangent-basis", "Zminus1-classes", "CY-determinant"].map(String::from).to_vec();
    }
    let report = run_suite(&ids)?;
    print!("{}", report.to_table());
    println!("body sha256 {}", report.body_hash());
    Ok(())
}
