fn main() {
    pcfv_cli::run()
}

mod pcfv_cli {
    pub fn run() {
        eprintln!("cli under construction");
        std::process::exit(64);
    }
}
