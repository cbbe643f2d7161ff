fn main() {
    kldist::cli::main()
}
