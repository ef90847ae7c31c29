#include "stochinv/bounds.hpp"
#include "stochinv/check.hpp"
#include "stochinv/parser.hpp"
#include "stochinv/sim.hpp"
#include "stochinv/synth.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace stochinv;

namespace {

Pcfg pcfgFromText(const std::string& text) { return parsePcfgFile(text); }

py::dict checkDict(const Pcfg& p, const CheckResult& res) {
    py::dict d;
    d["valid"] = res.valid;
    d["obligations"] = res.obligationsChecked;
    py::list viols;
    for (const auto& v : res.violations) viols.append(v.describe(p));
    d["violations"] = viols;
    py::list notes;
    for (const auto& n : res.notes) notes.append(n);
    d["notes"] = notes;
    return d;
}

} // namespace

PYBIND11_MODULE(_stochinv, m) {
    m.doc() = "Certificate synthesis and checking for affine probabilistic programs";

    m.def("parse_program", [](const std::string& source) {
        Ast ast = parseProgram(source);
        return prettyPrint(ast);
    }, py::arg("source"), "Parse a program and return its normalized pretty-print.");

    m.def("build_pcfg", [](const std::string& source) {
        Ast ast = parseProgram(source);
        return printPcfg(buildPcfg(ast));
    }, py::arg("source"), "Parse a program and return its control flow graph in the .pcfg format.");

    m.def("validate_pcfg", [](const std::string& pcfgText) {
        Pcfg p = pcfgFromText(pcfgText);
        std::vector<std::string> out;
        for (const auto& d : validatePcfg(p)) out.push_back(d.invariantName + ": " + d.message);
        return out;
    }, py::arg("pcfg"));

    m.def("azuma_tail", [](const std::string& eps, const std::string& c, const std::string& m0, long long n) {
        TailBound tb = azumaTail(*parseRat(eps), *parseRat(c), *parseRat(m0), n);
        return static_cast<double>(tb.value);
    }, py::arg("eps"), py::arg("c"), py::arg("m0"), py::arg("n"));

    m.def("reach_bound", [](const std::string& eps, const std::string& c, const std::string& m0) {
        ReachBound rb = reachBound(*parseRat(eps), *parseRat(c), *parseRat(m0));
        py::dict d;
        d["p"] = static_cast<double>(rb.value);
        d["A"] = rb.A.str();
        d["expr"] = rb.expr;
        return d;
    }, py::arg("eps"), py::arg("c"), py::arg("m0"));

    m.def("check_certificate", [](const std::string& pcfgText, const std::string& certText) {
        Pcfg p = pcfgFromText(pcfgText);
        Certificate cert = parseCertificate(certText, p);
        return checkDict(p, checkCertificate(p, cert));
    }, py::arg("pcfg"), py::arg("cert"));

    m.def("synthesize_repsm",
          [](const std::string& pcfgText, const std::string& invText, const std::string& piText, int sweep,
             int jobs) {
              Pcfg p = pcfgFromText(pcfgText);
              PredMap inv = parsePredMapFile(invText, p, true);
              PredMap pi = parsePredMapFile(piText, p, true);
              RepsmSynthResult r = synthesizeRepsm(p, inv, pi, sweep, jobs);
              py::dict d;
              switch (r.status) {
                  case SynthStatus::Ok: d["status"] = "ok"; break;
                  case SynthStatus::NoCertificate: d["status"] = "no-certificate"; break;
                  case SynthStatus::TrivialZero: d["status"] = "trivial-zero"; break;
                  case SynthStatus::TrivialOne: d["status"] = "trivial-one"; break;
              }
              d["p"] = static_cast<double>(toBigFloat(r.p));
              if (r.status == SynthStatus::Ok) {
                  d["certificate"] = printCertificate(r.cert, p);
                  d["c"] = ratDecimalStr(r.cert.c);
                  d["m0"] = ratDecimalStr(r.cert.m0);
                  d["offset"] = r.bestOffset;
              }
              return d;
          },
          py::arg("pcfg"), py::arg("invariant"), py::arg("pi"), py::arg("sweep") = 1000, py::arg("jobs") = 1);

    m.def("synthesize_rsm",
          [](const std::string& pcfgText, const std::string& invText, const std::string& targetText) {
              Pcfg p = pcfgFromText(pcfgText);
              PredMap inv = parsePredMapFile(invText, p, true);
              PredMap target = parsePredMapFile(targetText, p, false);
              RsmSynthResult r = synthesizeRsm(p, inv, target);
              py::dict d;
              d["status"] = r.status == SynthStatus::Ok ? "ok" : "no-certificate";
              if (r.status == SynthStatus::Ok) {
                  d["certificate"] = printCertificate(r.cert, p);
                  d["expected_time_bound"] = ratDecimalStr(r.expectedTimeBound);
              }
              return d;
          },
          py::arg("pcfg"), py::arg("invariant"), py::arg("target"));

    m.def("estimate",
          [](const std::string& pcfgText, long long runs, long long maxSteps, uint64_t seed,
             const std::string& eventText, double confidence, int jobs) {
              Pcfg p = pcfgFromText(pcfgText);
              std::optional<PredMap> event;
              if (!eventText.empty()) event = parsePredMapFile(eventText, p, false);
              SchedulerPolicy pol;
              Estimate est = estimate(p, pol, event ? &*event : nullptr, runs, maxSteps, seed, confidence, jobs);
              py::dict d;
              d["runs"] = est.runs;
              d["events"] = est.eventHits;
              d["terminated"] = est.terminated;
              d["censored"] = est.censored;
              d["frequency"] = est.frequency;
              d["ci"] = py::make_tuple(est.ciLow, est.ciHigh);
              d["mean_terminated_steps"] = est.meanTerminatedSteps;
              return d;
          },
          py::arg("pcfg"), py::arg("runs"), py::arg("max_steps"), py::arg("seed"), py::arg("event") = "",
          py::arg("confidence") = 0.95, py::arg("jobs") = 1);

    m.def("spot_check",
          [](const std::string& pcfgText, const std::string& certText, long long samples, uint64_t seed) {
              Pcfg p = pcfgFromText(pcfgText);
              Certificate cert = parseCertificate(certText, p);
              SpotCheckReport rep = spotCheck(p, cert, samples, seed);
              py::dict d;
              d["samples"] = rep.samplesTried;
              d["in_premise"] = rep.samplesInPremise;
              d["violations"] = rep.violations;
              return d;
          },
          py::arg("pcfg"), py::arg("cert"), py::arg("samples"), py::arg("seed"));

    auto verdictDict = [](const Verdict& v) {
        py::dict d;
        d["verdict"] = verdictKindName(v.kind);
        d["theorem"] = v.theorem;
        d["justification"] = v.justification;
        return d;
    };
    m.def("refute_as_termination",
          [verdictDict](const std::string& pcfgText, const std::string& certText) {
              Pcfg p = pcfgFromText(pcfgText);
              return verdictDict(refuteAsTermination(p, parseCertificate(certText, p)));
          },
          py::arg("pcfg"), py::arg("cert"));
    m.def("refute_finite_termination",
          [verdictDict](const std::string& pcfgText, const std::string& certText) {
              Pcfg p = pcfgFromText(pcfgText);
              return verdictDict(refuteFiniteTermination(p, parseCertificate(certText, p)));
          },
          py::arg("pcfg"), py::arg("cert"));
    m.def("check_persistence",
          [verdictDict](const std::string& pcfgText, const std::string& repsmText,
                        const std::string& rsmText, const std::string& k) {
              Pcfg p = pcfgFromText(pcfgText);
              return verdictDict(checkPersistence(p, parseCertificate(repsmText, p),
                                                  parseCertificate(rsmText, p), *parseRat(k)));
          },
          py::arg("pcfg"), py::arg("repsm"), py::arg("rsm"), py::arg("k"));

    m.def("termination_lower_bound",
          [](const std::string& pcfgText, const std::string& certText, const std::vector<std::string>& siTexts) {
              Pcfg p = pcfgFromText(pcfgText);
              Certificate rsm = parseCertificate(certText, p);
              std::vector<StochasticInvariant> sis;
              for (const auto& t : siTexts) sis.push_back(parseStochInvFile(t, p));
              return ratDecimalStr(terminationLowerBound(p, sis, rsm));
          },
          py::arg("pcfg"), py::arg("rsm"), py::arg("stoch_invs"));

    py::register_exception<Error>(m, "StochinvError");
}
