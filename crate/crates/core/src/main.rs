// SPDX-License-Identifier: Apache-2.0

use std::io;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BCC_LOG", "warn")).init();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = bcc_core::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
