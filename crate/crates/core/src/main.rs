fn main() {
    std::process::exit(bottleneck_arena::workbench::cli::run(std::env::args_os()));
}
