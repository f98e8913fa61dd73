use std::io::{stderr, stdout, BufWriter, Write};

fn main() {
    let mut out = BufWriter::new(stdout());
    let mut err = stderr().lock();
    let code = bulkq::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
