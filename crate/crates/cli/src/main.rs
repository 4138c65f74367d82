use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let (code, stdout, stderr) = seqprop_cli::run(&args);
    print!("{stdout}");
    eprint!("{stderr}");
    ExitCode::from(code)
}
