#include "stochinv/bounds.hpp"
#include "stochinv/check.hpp"
#include "stochinv/parser.hpp"
#include "stochinv/sim.hpp"
#include "stochinv/synth.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace stochinv;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << content;
}

Rat requireRat(const std::string& text, const char* what) {
    auto r = parseRat(text);
    if (!r) throw FormatError(std::string("bad rational for ") + what + ": '" + text + "'");
    return *r;
}

Pcfg loadPcfg(const std::string& path) { return parsePcfgFile(slurp(path)); }

SchedulerPolicy makePolicy(const std::string& ndet, const std::string& script, const std::string& choose) {
    SchedulerPolicy pol;
    if (ndet == "uniform") pol.ndet = SchedulerPolicy::NdetRule::UniformRandom;
    else if (ndet == "first") pol.ndet = SchedulerPolicy::NdetRule::FirstListed;
    else if (ndet == "scripted") pol.ndet = SchedulerPolicy::NdetRule::Scripted;
    else throw FormatError("policy must be uniform|first|scripted");
    if (!script.empty()) {
        std::istringstream in(script);
        std::string tok;
        while (std::getline(in, tok, ',')) pol.script.push_back(std::stoi(tok));
    }
    if (choose == "uniform") pol.choose = SchedulerPolicy::ChooseRule::UniformSet;
    else if (choose == "endpoint") pol.choose = SchedulerPolicy::ChooseRule::FixedEndpoint;
    else throw FormatError("choose rule must be uniform|endpoint");
    return pol;
}

int runCli(int argc, char** argv) {
    CLI::App app{"stochinv: certificate synthesis and checking for affine probabilistic programs"};
    app.require_subcommand(1);

    // parse
    auto* cmdParse = app.add_subcommand("parse", "parse an .app program and pretty-print it");
    std::string parseFile;
    cmdParse->add_option("file", parseFile, "program file")->required();

    // build
    auto* cmdBuild = app.add_subcommand("build", "build the control flow graph of an .app program");
    std::string buildFile, buildOut;
    cmdBuild->add_option("file", buildFile, "program file")->required();
    cmdBuild->add_option("-o,--output", buildOut, "write the graph to this file");

    // synth-repsm
    auto* cmdRep = app.add_subcommand("synth-repsm", "synthesize a repulsing certificate and stochastic invariant");
    std::string repPcfg, repInv, repPi, repOut, repSiOut;
    int repSweep = 1000, repJobs = 1;
    cmdRep->add_option("--pcfg", repPcfg)->required();
    cmdRep->add_option("--invariant", repInv, "supporting predicate map file")->required();
    cmdRep->add_option("--pi", repPi, "predicate map whose violation probability is bounded")->required();
    cmdRep->add_option("--sweep", repSweep, "difference-bound sweep length");
    cmdRep->add_option("--jobs", repJobs, "parallel LP solves");
    cmdRep->add_option("-o,--output", repOut, "certificate output file");
    cmdRep->add_option("--si-out", repSiOut, "stochastic invariant output file");

    // synth-rsm
    auto* cmdRsm = app.add_subcommand("synth-rsm", "synthesize a ranking certificate");
    std::string rsmPcfg, rsmInv, rsmTarget, rsmOut;
    cmdRsm->add_option("--pcfg", rsmPcfg)->required();
    cmdRsm->add_option("--invariant", rsmInv)->required();
    cmdRsm->add_option("--target", rsmTarget, "target predicate map file ('terminal' keyword supported)")->required();
    cmdRsm->add_option("-o,--output", rsmOut);

    // bound
    auto* cmdBound = app.add_subcommand("bound", "evaluate the reachability tail bound");
    std::string bEps, bC, bM0;
    long long bTailN = -1;
    cmdBound->add_option("--eps", bEps)->required();
    cmdBound->add_option("--c", bC)->required();
    cmdBound->add_option("--m0", bM0)->required();
    cmdBound->add_option("--tail-n", bTailN, "also print the n-step tail term");

    // check
    auto* cmdCheck = app.add_subcommand("check", "verify a certificate");
    std::string chkPcfg, chkCert, chkFormat = "text";
    long long chkSpot = 0;
    uint64_t chkSeed = 1;
    cmdCheck->add_option("--pcfg", chkPcfg)->required();
    cmdCheck->add_option("--cert", chkCert)->required();
    cmdCheck->add_option("--spot", chkSpot, "additionally run this many numeric spot samples");
    auto* chkSeedOpt = cmdCheck->add_option("--seed", chkSeed, "required with --spot");
    cmdCheck->add_option("--format", chkFormat, "text|csv");

    // refute-as / refute-finite
    auto* cmdRefAs = app.add_subcommand("refute-as", "refute almost-sure termination");
    std::string raPcfg, raCert;
    cmdRefAs->add_option("--pcfg", raPcfg)->required();
    cmdRefAs->add_option("--cert", raCert)->required();
    auto* cmdRefFin = app.add_subcommand("refute-finite", "refute finite expected termination time");
    std::string rfPcfg, rfCert;
    cmdRefFin->add_option("--pcfg", rfPcfg)->required();
    cmdRefFin->add_option("--cert", rfCert)->required();

    // persistence
    auto* cmdPers = app.add_subcommand("persistence", "persistence verdict from a certificate pair");
    std::string pePcfg, peRep, peRsm, peK;
    cmdPers->add_option("--pcfg", pePcfg)->required();
    cmdPers->add_option("--repsm", peRep)->required();
    cmdPers->add_option("--rsm", peRsm)->required();
    cmdPers->add_option("--K", peK)->required();

    // combine
    auto* cmdComb = app.add_subcommand("combine", "combine stochastic invariants with a ranking certificate");
    std::string coPcfg, coRsm, coSis;
    cmdComb->add_option("--pcfg", coPcfg, "graph file (locations and variables of the certificates)")->required();
    cmdComb->add_option("--rsm", coRsm)->required();
    cmdComb->add_option("--stochinv", coSis, "comma-separated stochastic invariant files")->required();

    // simulate
    auto* cmdSim = app.add_subcommand("simulate", "Monte Carlo estimation");
    std::string siPcfg, siEvent, siCsv, siNdet = "uniform", siScript, siChoose = "uniform", siFormat = "text";
    long long siRuns = 1000, siMax = 100000;
    uint64_t siSeed = 0;
    double siConf = 0.95;
    int siJobs = 1;
    cmdSim->add_option("--pcfg", siPcfg)->required();
    cmdSim->add_option("--runs", siRuns)->required();
    cmdSim->add_option("--max-steps", siMax)->required();
    cmdSim->add_option("--seed", siSeed)->required();
    cmdSim->add_option("--event", siEvent, "predicate map file; hits are counted as events");
    cmdSim->add_option("--confidence", siConf);
    cmdSim->add_option("--policy", siNdet, "uniform|first|scripted");
    cmdSim->add_option("--script", siScript, "comma-separated indices for the scripted policy");
    cmdSim->add_option("--choose", siChoose, "uniform|endpoint");
    cmdSim->add_option("--csv-out", siCsv, "write per-replica rows replica,outcome,steps");
    cmdSim->add_option("--format", siFormat, "text|csv");
    cmdSim->add_option("--jobs", siJobs);

    // export-quad
    auto* cmdQuad = app.add_subcommand("export-quad", "emit the joint template synthesis system");
    std::string qPcfg, qTarget, qTemplate, qInv, qOut;
    cmdQuad->add_option("--pcfg", qPcfg)->required();
    cmdQuad->add_option("--target", qTarget)->required();
    cmdQuad->add_option("--template", qTemplate, "shape like l2:1 or l0:2,l1:1+1")->required();
    cmdQuad->add_option("--invariant", qInv, "pure invariant file (default: true)");
    cmdQuad->add_option("-o,--output", qOut);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (cmdParse->parsed()) {
        Ast ast = parseProgram(slurp(parseFile));
        std::cout << prettyPrint(ast);
        return 0;
    }
    if (cmdBuild->parsed()) {
        Ast ast = parseProgram(slurp(buildFile));
        Pcfg p = buildPcfg(ast);
        auto diags = validatePcfg(p);
        std::string text = printPcfg(p);
        if (!buildOut.empty()) writeFile(buildOut, text);
        else std::cout << text;
        for (const auto& d : diags)
            std::cerr << "diagnostic: " << d.invariantName << ": " << d.message << "\n";
        return diags.empty() ? 0 : 3;
    }
    if (cmdRep->parsed()) {
        Pcfg p = loadPcfg(repPcfg);
        PredMap inv = parsePredMapFile(slurp(repInv), p, true);
        PredMap pi = parsePredMapFile(slurp(repPi), p, true);
        RepsmSynthResult r = synthesizeRepsm(p, inv, pi, repSweep, repJobs);
        for (const auto& n : r.notes) std::cerr << "note: " << n << "\n";
        switch (r.status) {
            case SynthStatus::TrivialZero:
                std::cout << "status: trivial-zero\np: 0\n";
                return 0;
            case SynthStatus::TrivialOne:
                std::cout << "status: trivial-one\np: 1\n";
                return 0;
            case SynthStatus::NoCertificate:
                std::cout << "status: no-certificate\n";
                return 3;
            case SynthStatus::Ok:
                break;
        }
        std::cout << "status: ok\n";
        std::cout << "c_min: " << ratDecimalStr(r.cMin) << "\n";
        std::cout << "offset: " << r.bestOffset << "\n";
        std::cout << "c: " << ratDecimalStr(r.cert.c) << "\n";
        std::cout << "m0: " << ratDecimalStr(r.cert.m0) << "\n";
        std::cout << "p: " << sci(toBigFloat(r.p)) << "\n";
        std::cout << "p-expr: " << reachBound(r.cert.eps, r.cert.c, r.cert.m0).expr << "\n";
        std::string certText = printCertificate(r.cert, p);
        if (!repOut.empty()) writeFile(repOut, certText);
        else std::cout << certText;
        if (!repSiOut.empty()) {
            StochasticInvariant si;
            si.pi = pi;
            si.p = r.p;
            writeFile(repSiOut, printStochInv(si, p));
        }
        return 0;
    }
    if (cmdRsm->parsed()) {
        Pcfg p = loadPcfg(rsmPcfg);
        PredMap inv = parsePredMapFile(slurp(rsmInv), p, true);
        PredMap target = parsePredMapFile(slurp(rsmTarget), p, false);
        RsmSynthResult r = synthesizeRsm(p, inv, target);
        for (const auto& n : r.notes) std::cerr << "note: " << n << "\n";
        if (r.status != SynthStatus::Ok) {
            std::cout << "status: no-certificate\n";
            return 3;
        }
        std::cout << "status: ok\n";
        std::cout << "expected-time-bound: " << ratDecimalStr(r.expectedTimeBound) << "\n";
        std::string certText = printCertificate(r.cert, p);
        if (!rsmOut.empty()) writeFile(rsmOut, certText);
        else std::cout << certText;
        return 0;
    }
    if (cmdBound->parsed()) {
        Rat eps = requireRat(bEps, "--eps"), c = requireRat(bC, "--c"), m0 = requireRat(bM0, "--m0");
        ReachBound rb = reachBound(eps, c, m0);
        std::cout << "p: " << sci(rb.value) << "\n";
        std::cout << "A: " << rb.A.str() << "\n";
        std::cout << "expr: " << rb.expr << "\n";
        if (bTailN >= 0) {
            TailBound tb = azumaTail(eps, c, m0, bTailN);
            std::cout << "tail(" << bTailN << "): " << sci(tb.value) << "\n";
        }
        return 0;
    }
    if (cmdCheck->parsed()) {
        if (chkSpot > 0 && chkSeedOpt->count() == 0)
            throw Error("--spot needs an explicit --seed (no wall-clock seeding)", 1);
        Pcfg p = loadPcfg(chkPcfg);
        Certificate cert = parseCertificate(slurp(chkCert), p);
        CheckResult res = checkCertificate(p, cert);
        for (const auto& n : res.notes) std::cerr << "note: " << n << "\n";
        if (chkFormat == "csv") {
            std::cout << "location,kind,label,status\n";
            for (const auto& row : res.table)
                std::cout << row.location << "," << row.kind << ",\"" << row.label << "\"," << row.status
                          << "\n";
        } else {
            std::cout << (res.valid ? "valid" : "INVALID") << " (" << res.obligationsChecked
                      << " obligations)\n";
            for (const auto& v : res.violations) std::cout << "violation: " << v.describe(p) << "\n";
        }
        if (chkSpot > 0) {
            SpotCheckReport rep = spotCheck(p, cert, chkSpot, chkSeed);
            std::cout << "spot: " << rep.violations << " violations in " << rep.samplesInPremise
                      << " in-premise evaluations (" << rep.samplesTried << " samples)\n";
            for (const auto& s : rep.firstViolations) std::cout << "spot-violation: " << s << "\n";
        }
        return res.valid ? 0 : 3;
    }
    if (cmdRefAs->parsed() || cmdRefFin->parsed()) {
        bool finite = cmdRefFin->parsed();
        Pcfg p = loadPcfg(finite ? rfPcfg : raPcfg);
        std::string certPath = finite ? rfCert : raCert;
        Certificate cert = parseCertificate(slurp(certPath), p);
        Verdict v = finite ? refuteFiniteTermination(p, cert) : refuteAsTermination(p, cert);
        std::cout << verdictReport(v, certPath);
        return v.kind == Verdict::Kind::Unknown ? 3 : 0;
    }
    if (cmdPers->parsed()) {
        Pcfg p = loadPcfg(pePcfg);
        Certificate repsm = parseCertificate(slurp(peRep), p);
        Certificate rsm = parseCertificate(slurp(peRsm), p);
        Verdict v = checkPersistence(p, repsm, rsm, requireRat(peK, "--K"));
        std::cout << verdictReport(v, peRep);
        return v.kind == Verdict::Kind::Unknown ? 3 : 0;
    }
    if (cmdComb->parsed()) {
        Pcfg p = loadPcfg(coPcfg);
        Certificate rsm = parseCertificate(slurp(coRsm), p);
        std::vector<StochasticInvariant> sis;
        std::istringstream in(coSis);
        std::string path;
        while (std::getline(in, path, ','))
            if (!path.empty()) sis.push_back(parseStochInvFile(slurp(path), p));
        Rat bound = terminationLowerBound(p, sis, rsm);
        Verdict v;
        v.kind = Verdict::Kind::TerminationLowerBound;
        v.theorem = "union bound over stochastic invariants supporting a ranking certificate";
        v.bound = bound;
        v.justification = "the target is reached with probability at least 1 - sum of the invariant "
                          "violation bounds";
        std::cout << verdictReport(v, coRsm);
        std::cout << "bound-decimal: " << ratDecimalStr(bound) << "\n";
        return 0;
    }
    if (cmdSim->parsed()) {
        Pcfg p = loadPcfg(siPcfg);
        SchedulerPolicy pol = makePolicy(siNdet, siScript, siChoose);
        std::optional<PredMap> event;
        if (!siEvent.empty()) event = parsePredMapFile(slurp(siEvent), p, false);
        std::vector<RunOutcome> outcomes;
        Estimate est = estimate(p, pol, event ? &*event : nullptr, siRuns, siMax, siSeed, siConf, siJobs,
                                siCsv.empty() ? nullptr : &outcomes);
        if (!siCsv.empty()) {
            std::ostringstream os;
            os << "replica,outcome,steps\n";
            for (size_t i = 0; i < outcomes.size(); ++i)
                os << i << "," << outcomeKindName(outcomes[i].kind) << "," << outcomes[i].steps << "\n";
            writeFile(siCsv, os.str());
        }
        std::ostream& os = std::cout;
        if (siFormat == "csv") {
            os << "runs,events,terminated,censored,frequency,ci_low,ci_high,mean_terminated_steps\n";
            os << est.runs << "," << est.eventHits << "," << est.terminated << "," << est.censored << ","
               << est.frequency << "," << est.ciLow << "," << est.ciHigh << "," << est.meanTerminatedSteps
               << "\n";
        } else {
            os << "runs: " << est.runs << "\n";
            os << "events: " << est.eventHits << " (frequency " << est.frequency << ")\n";
            os << "terminated: " << est.terminated << " censored: " << est.censored << "\n";
            os << "clopper-pearson " << est.confidence << ": [" << est.ciLow << ", " << est.ciHigh << "]\n";
            os << "mean terminated steps: " << est.meanTerminatedSteps << "\n";
            os << "note: estimates are taken under one fixed policy, hence lower bounds on the "
                  "supremum over schedulers\n";
        }
        return 0;
    }
    if (cmdQuad->parsed()) {
        Pcfg p = loadPcfg(qPcfg);
        PredMap target = parsePredMapFile(slurp(qTarget), p, false);
        PredMap inv = qInv.empty() ? PredMap::top() : parsePredMapFile(slurp(qInv), p, true);
        TemplateShape shape = parseTemplateShape(qTemplate, p);
        std::ostringstream os;
        QuadraticExportStats st = exportQuadraticSystem(p, target, shape, inv, os);
        if (!qOut.empty()) writeFile(qOut, os.str());
        else std::cout << os.str();
        std::cerr << "symbols: " << st.symbols << " (template " << st.siCoefficients << ", multipliers "
                  << st.multipliers << "), asserts: " << st.asserts << ", quadratic monomials: "
                  << st.quadraticMonomials << "\n";
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return runCli(argc, argv);
    } catch (const stochinv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exitCode;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
