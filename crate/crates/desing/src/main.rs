//! Thin wrapper: all behavior lives in the library's command driver.

fn main() {
    std::process::exit(desing::cli::run());
}
