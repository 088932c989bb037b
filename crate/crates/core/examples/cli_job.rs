//! Runs a job file through the command-line front end without spawning a process.
//!
//! `cargo run --example cli_job -- linearize examples/jobs/linearize.toml --summary`

fn main() {
    let mut args: Vec<String> = std::env::args().collect();
    if args.len() < 2 {
        let job = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/jobs/linearize.toml");
        args = vec!["germlin".into(), "linearize".into(), job.into(), "--summary".into()];
    }
    let code = germlin::cli::run(args, &mut std::io::stdout().lock());
    std::process::exit(code);
}
