fn main() {
    twochart::cli::main()
}
