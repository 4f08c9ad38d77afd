fn main() {
    let code = bgpmatch::cli::run(
        std::env::args_os(),
        std::env::var("BGP_THREADS").ok(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
