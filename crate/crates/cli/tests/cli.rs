use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::process::{Child, Command, Output, Stdio};
use std::time::Duration;

use serde_json::Value;

fn headsup() -> Command {
    Command::new(env!("CARGO_BIN_EXE_headsup"))
}

fn run_with_input(args: &[&str], input: &str) -> Output {
    let mut child = headsup()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn explore_flop_reports_and_exits_zero() {
    let out = headsup()
        .args(["explore", "--street", "flop"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["violations"], 0);
    assert_eq!(report["reports"].as_array().unwrap().len(), 3);
}

#[test]
fn fuzz_is_repeatable_and_physical_mode_works() {
    let args = [
        "fuzz", "--hands", "300", "--seed", "4", "--mode", "physical",
    ];
    let a = headsup().args(args).output().unwrap();
    let b = headsup().args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["config"]["mode"], "physical");
}

#[test]
fn simulate_prints_a_convergence_report() {
    let out = headsup()
        .args(["simulate", "--dup", "0.3", "--hands", "100", "--gaps", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["converged"], true);
    assert!(r["recoveries"].as_u64().unwrap() >= 2);
    assert!(r.get("sessions").is_none());

    let local = headsup()
        .args(["simulate", "--transport", "local", "--hands", "20"])
        .output()
        .unwrap();
    assert!(local.status.success());
    assert_eq!(json(&local)["consistent"], true);
}

#[test]
fn play_local_survives_garbage() {
    let out = run_with_input(
        &["play-local", "--seed", "5"],
        "\n\u{00e9}\u{00e9}\n-3\n99 1\ncall 5\n3\n9999\nmax\nq\n",
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("amount [4, 200]> "), "{text}");
    assert!(text.contains("enter a number in [4, 200]"), "{text}");
    assert!(text.contains("no action 99"), "{text}");
    assert!(text.contains("call takes no amount"), "{text}");
    assert!(text.contains("seat 1 to act"), "{text}");
}

#[test]
fn play_local_physical_asks_both_seats() {
    let out = run_with_input(
        &["play-local", "--deck", "physical", "--hands", "1"],
        "call\ncheck\ncheck\ncheck\ncheck\ncheck\ncheck\ncheck\nnobody\n1\n1\n",
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("seat 0, who won?") && text.contains("seat 1, who won?"));
    assert!(text.contains("expected 0, 1 or chop"));
    assert!(text.contains("seat 1 wins 4 (declared)"), "{text}");
}

#[test]
fn serve_fails_when_the_address_is_taken() {
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = taken.local_addr().unwrap().to_string();
    let out = headsup()
        .args(["serve", "--listen", &addr])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot listen"));
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
    }
}

fn first_line(reader: &mut impl BufRead) -> String {
    let mut line = String::new();
    reader.read_line(&mut line).unwrap();
    line
}

#[test]
fn two_bot_processes_play_over_the_server() {
    let mut server = Server(
        headsup()
            .args(["serve", "--listen", "127.0.0.1:0"])
            .stderr(Stdio::piped())
            .spawn()
            .unwrap(),
    );
    let mut stderr = BufReader::new(server.0.stderr.take().unwrap());
    let line = first_line(&mut stderr);
    let addr = line
        .trim()
        .strip_prefix("listening on ")
        .expect("address line");
    let url = format!("ws://{addr}/ws");

    let mut host = headsup()
        .args([
            "host", "--server", &url, "--bot", "1", "--hands", "10", "--seed", "3",
        ])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut host_out = BufReader::new(host.stdout.take().unwrap());
    let created = first_line(&mut host_out);
    let code = created
        .strip_prefix("session ")
        .and_then(|s| s.split(':').next())
        .expect("session code")
        .to_string();
    let join = headsup()
        .args([
            "join", "--server", &url, "--bot", "2", "--hands", "10", "--code", &code,
        ])
        .output()
        .unwrap();
    assert!(join.status.success());
    assert!(host.wait().unwrap().success());
    let mut rest = String::new();
    std::io::Read::read_to_string(&mut host_out, &mut rest).unwrap();
    let joined = String::from_utf8_lossy(&join.stdout);
    let tail = |s: &str| {
        s.lines()
            .last()
            .unwrap_or("")
            .split(": ")
            .nth(1)
            .map(str::to_string)
    };
    assert!(rest.contains("10 hands settled"), "{rest}");
    assert!(joined.contains("10 hands settled"), "{joined}");
    assert_eq!(
        tail(&rest),
        tail(&joined),
        "both sides report the same ledger"
    );

    // Interrupt: the server closes sessions and exits cleanly.
    let pid = server.0.id().to_string();
    assert!(Command::new("kill")
        .args(["-INT", &pid])
        .status()
        .unwrap()
        .success());
    let mut status = None;
    for _ in 0..50 {
        if let Some(s) = server.0.try_wait().unwrap() {
            status = Some(s);
            break;
        }
        std::thread::sleep(Duration::from_millis(100));
    }
    assert!(status.expect("server exits after SIGINT").success());
}
