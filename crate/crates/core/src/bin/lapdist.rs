fn main() {
    let out = lapdist::cli::run(std::env::args_os());
    if out.code != 2 {
        print!("{}", out.output);
    } else {
        eprint!("{}", out.output);
    }
    std::process::exit(out.code);
}
