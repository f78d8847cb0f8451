use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = vpcal_cli::Cli::parse();
    if let Err(e) = vpcal_cli::run(cli) {
        eprintln!("vpcal: {e}");
        std::process::exit(e.exit_code());
    }
}
