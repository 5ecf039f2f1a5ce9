use clap::Parser;
use symlog_cli::{commands::EXIT_INVALID, run, Cli};

// OpenBLAS 0.3.20 selects its Cooperlake kernels on AVX512-BF16 hardware and
// those give wrong answers in blocked real LAPACK routines. The core type is
// read when the library loads, so it has to be in the environment before the
// process starts; re-execute once with it set.
#[cfg(all(unix, target_arch = "x86_64"))]
fn pin_blas_core() {
    use std::os::unix::process::CommandExt;
    const VAR: &str = "OPENBLAS_CORETYPE";
    if std::env::var_os(VAR).is_some() || !std::arch::is_x86_feature_detected!("avx512f") {
        return;
    }
    let Ok(exe) = std::env::current_exe() else { return };
    let err = std::process::Command::new(exe).args(std::env::args_os().skip(1)).env(VAR, "SkylakeX").exec();
    eprintln!("symlog: warning: could not re-execute with {VAR} set: {err}");
}

#[cfg(not(all(unix, target_arch = "x86_64")))]
fn pin_blas_core() {}

fn main() {
    pin_blas_core();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    std::process::exit(run(&cli));
}
