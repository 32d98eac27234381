fn main() {
    // CLI wired up once the engine layers exist.
}
