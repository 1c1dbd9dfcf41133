fn main() { std::process::exit(cicy4::cli::main()); }
