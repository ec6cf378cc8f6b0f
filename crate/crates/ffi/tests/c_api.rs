use std::ffi::{c_char, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use memsat_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let needed = unsafe { memsat_last_error_message(buf.as_mut_ptr(), buf.len()) };
    if needed == 0 {
        return String::new();
    }
    let bytes: Vec<u8> = buf.iter().take_while(|&&c| c != 0).map(|&c| c as u8).collect();
    String::from_utf8(bytes).unwrap()
}

fn generated(n: usize, seed: u64) -> (*mut MemsatInstance, Vec<u8>) {
    let mut inst = ptr::null_mut();
    let mut planted = vec![9u8; n];
    let status = unsafe { memsat_instance_generate(n, 4.3, 0.08, seed, planted.as_mut_ptr(), &mut inst) };
    assert_eq!(status, MemsatStatus::Ok);
    (inst, planted)
}

#[test]
fn generate_solve_and_read_assignment() {
    let (inst, planted) = generated(20, 4);
    assert!(planted.iter().all(|&b| b <= 1));
    unsafe {
        assert_eq!(memsat_instance_num_vars(inst), 20);
        assert_eq!(memsat_instance_num_clauses(inst), 86);
        let mut cfg = memsat_solve_config_default(inst);
        cfg.seed = 11;
        let mut res = ptr::null_mut();
        assert_eq!(memsat_solve(inst, &cfg, &mut res), MemsatStatus::Ok);
        assert_eq!(memsat_result_outcome(res), MemsatOutcome::Sat);
        assert!(memsat_result_steps(res) > 0);
        assert_eq!(memsat_result_cycles(res), 0);

        let mut written = 0usize;
        let mut small = [0u8; 4];
        assert_eq!(
            memsat_result_assignment(res, small.as_mut_ptr(), small.len(), &mut written),
            MemsatStatus::BufferTooSmall
        );
        assert_eq!(written, 20);
        assert!(last_error().contains("20"));
        let mut buf = [0u8; 20];
        assert_eq!(memsat_result_assignment(res, buf.as_mut_ptr(), buf.len(), &mut written), MemsatStatus::Ok);
        assert_eq!(last_error(), "");
        assert!(buf.iter().all(|&b| b <= 1));
        memsat_result_free(res);
        memsat_instance_free(inst);
    }
}

#[test]
fn hw_engine_reports_cycles() {
    let (inst, _) = generated(10, 2);
    unsafe {
        let mut cfg = memsat_solve_config_default(inst);
        cfg.engine = MemsatEngine::Hw as u32;
        let mut res = ptr::null_mut();
        assert_eq!(memsat_solve(inst, &cfg, &mut res), MemsatStatus::Ok);
        let steps = memsat_result_steps(res);
        assert_eq!(memsat_result_cycles(res), steps * 44);
        memsat_result_free(res);

        cfg.engine = 7;
        assert_eq!(memsat_solve(inst, &cfg, &mut res), MemsatStatus::InvalidConfig);
        assert!(res.is_null());
        cfg.engine = MemsatEngine::Hw as u32;
        cfg.frac_bits = 0;
        assert_eq!(memsat_solve(inst, &cfg, &mut res), MemsatStatus::InvalidConfig);
        assert!(!last_error().is_empty());
        memsat_instance_free(inst);
    }
}

#[test]
fn parse_errors_and_null_handling() {
    let text = b"c toy\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n";
    let mut inst = ptr::null_mut();
    unsafe {
        assert_eq!(memsat_instance_parse_dimacs(text.as_ptr(), text.len(), &mut inst), MemsatStatus::Ok);
        assert_eq!(memsat_instance_num_clauses(inst), 2);
        memsat_instance_free(inst);

        let bad = b"p cnf 3 1\n1 2 0\n";
        let mut inst = ptr::null_mut();
        assert_eq!(memsat_instance_parse_dimacs(bad.as_ptr(), bad.len(), &mut inst), MemsatStatus::ParseError);
        assert!(inst.is_null());
        assert!(!last_error().is_empty());

        assert_eq!(memsat_instance_parse_dimacs(ptr::null(), 0, &mut inst), MemsatStatus::NullPointer);
        assert_eq!(memsat_instance_num_vars(ptr::null()), 0);
        let mut res = ptr::null_mut();
        let cfg = memsat_solve_config_default(ptr::null());
        assert_eq!(memsat_solve(ptr::null(), &cfg, &mut res), MemsatStatus::NullPointer);
        memsat_instance_free(ptr::null_mut());
        memsat_result_free(ptr::null_mut());

        let invalid = [0xffu8, 0xfe, 0];
        assert_eq!(memsat_instance_load(invalid.as_ptr() as *const c_char, &mut inst), MemsatStatus::InvalidUtf8);
        let missing = CString::new("/nonexistent/instance.cnf").unwrap();
        assert_eq!(memsat_instance_load(missing.as_ptr(), &mut inst), MemsatStatus::Io);

        let mut out = ptr::null_mut();
        assert_eq!(
            memsat_instance_generate(2, 4.3, 0.08, 0, ptr::null_mut(), &mut out),
            MemsatStatus::InvalidConfig
        );
    }
}

#[test]
fn budget_exhaustion_has_no_assignment() {
    // all eight sign patterns over three variables
    let mut text = String::from("p cnf 3 8\n");
    for bits in 0..8 {
        for v in 0..3 {
            let lit = if bits >> v & 1 == 1 { v + 1 } else { -(v + 1) };
            text += &format!("{lit} ");
        }
        text += "0\n";
    }
    let mut inst = ptr::null_mut();
    unsafe {
        assert_eq!(memsat_instance_parse_dimacs(text.as_ptr(), text.len(), &mut inst), MemsatStatus::Ok);
        let mut cfg = memsat_solve_config_default(inst);
        cfg.max_steps = 500;
        let mut res = ptr::null_mut();
        assert_eq!(memsat_solve(inst, &cfg, &mut res), MemsatStatus::Ok);
        assert_eq!(memsat_result_outcome(res), MemsatOutcome::BudgetExhausted);
        assert_eq!(memsat_result_steps(res), 500);
        let mut written = 99;
        assert_eq!(memsat_result_assignment(res, ptr::null_mut(), 0, &mut written), MemsatStatus::Ok);
        assert_eq!(written, 0);
        memsat_result_free(res);
        memsat_instance_free(inst);
    }
}

#[test]
fn model_helpers() {
    assert_eq!(memsat_project_hw_time(10_000, 43, 1e8, 1), 4.4e-3);
    assert_eq!(memsat_estimate_luts(90), 57_606.0);
}

#[test]
fn header_declares_every_export() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/memsat.h")).unwrap();
    let source = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|s| s.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    for ty in ["MemsatInstance", "MemsatResult", "MEMSAT_STATUS_BUFFER_TOO_SMALL", "MEMSAT_ENGINE_HW"] {
        assert!(header.contains(ty), "{ty}");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(dir.join("include/memsat.h"))
        .output()
    else {
        eprintln!("no C compiler on PATH; header syntax not checked");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
