use std::io::Write;

fn main() {
    let report = interax_cli::run(std::env::args_os());
    let rendered = report.render();
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(rendered.as_bytes()).ok();
    stdout.flush().ok();
    std::process::exit(report.exit_code());
}
