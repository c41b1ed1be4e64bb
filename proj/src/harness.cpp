#include "fracldg/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fracldg {

std::string case_name(CaseId id) {
    switch (id) {
        case CaseId::Ex1Diffusion: return "ex1";
        case CaseId::Ex2Burgers: return "ex2";
        case CaseId::Ex3Nls: return "ex3";
        default: return "ex4";
    }
}

std::optional<CaseId> case_from_name(const std::string& name) {
    if (name == "ex1") return CaseId::Ex1Diffusion;
    if (name == "ex2") return CaseId::Ex2Burgers;
    if (name == "ex3") return CaseId::Ex3Nls;
    if (name == "ex4") return CaseId::Ex4CoupledNls;
    return std::nullopt;
}

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::K: return "K";
        case SweepAxis::Dt: return "dt";
        default: return "theta";
    }
}

std::vector<double> estimate_order(const std::vector<double>& errors,
                                   const std::vector<double>& resolutions) {
    if (errors.size() != resolutions.size())
        throw std::invalid_argument("estimate_order: size mismatch");
    if (errors.size() < 2) throw std::invalid_argument("estimate_order: need at least 2 rows");
    for (double e : errors)
        if (!(e > 0.0)) throw std::invalid_argument("estimate_order: invalid data, errors must be positive");
    std::vector<double> orders(errors.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i < errors.size(); ++i)
        orders[i] = std::log(errors[i - 1] / errors[i]) / std::log(resolutions[i] / resolutions[i - 1]);
    return orders;
}

CaseRunResult run_manufactured(CaseId id, double beta, int num_cells, int degree, double T,
                               double dt, int num_nodes, const std::string& weight,
                               ForcingMode mode, FluxOrientation flux) {
    const int steps = static_cast<int>(std::lround(T / dt));
    if (steps < 1 || std::abs(steps * dt - T) > 1e-9 * std::max(1.0, T))
        throw std::invalid_argument("run_manufactured: dt must divide T");

    const ManufacturedCase mcase = make_case(id, beta, mode, WeightFunction::preset(weight));
    const DistOrderScheme scheme = build_dist_order_scheme(mcase.weight, num_nodes, dt, steps);
    const SpacePtr space = make_space(-1.0, 1.0, num_cells, degree);
    const EquationSpec eq = make_equation(mcase, scheme);

    std::vector<ScalarFn> initial(eq.num_components(), [](double) { return 0.0; });
    SolverState state = run(eq, space, scheme, initial, T, nullptr, flux);

    CaseRunResult res;
    switch (id) {
        case CaseId::Ex1Diffusion:
        case CaseId::Ex2Burgers:
            res.err_u1 = l2_error(state.current(0),
                                  [&](double x) { return exact_scalar(mcase, x, T); });
            break;
        case CaseId::Ex3Nls: {
            const double ep = l2_error(state.current(0),
                                       [&](double x) { return exact_complex(mcase, x, T).first; });
            const double eq_ = l2_error(state.current(1), [&](double x) {
                return exact_complex(mcase, x, T).second;
            });
            res.err_u1 = std::hypot(ep, eq_);
            break;
        }
        case CaseId::Ex4CoupledNls: {
            auto re = [&](double x) { return exact_complex(mcase, x, T).first; };
            auto im = [&](double x) { return exact_complex(mcase, x, T).second; };
            res.err_u1 = std::hypot(l2_error(state.current(0), re), l2_error(state.current(1), im));
            res.err_u2 = std::hypot(l2_error(state.current(2), re), l2_error(state.current(3), im));
            break;
        }
    }
    return res;
}

namespace {

void validate_spec(const RunSpec& spec) {
    if (!(spec.beta > 1.0 && spec.beta < 2.0))
        throw std::invalid_argument("run_sweep: beta must lie in (1,2)");
    if (spec.degree < 0) throw std::invalid_argument("run_sweep: N >= 0 required");
    if (spec.values.empty()) throw std::invalid_argument("run_sweep: empty sweep list");
    if (!(spec.T > 0.0)) throw std::invalid_argument("run_sweep: T > 0 required");
    if (spec.jobs < 1) throw std::invalid_argument("run_sweep: jobs >= 1 required");
    if (spec.num_nodes < 1) throw std::invalid_argument("run_sweep: S >= 1 required");
    if (!(spec.dt > 0.0)) throw std::invalid_argument("run_sweep: dt > 0 required");
    if (spec.num_cells < 1) throw std::invalid_argument("run_sweep: K >= 1 required");
    if (spec.field != 1 && spec.field != 2)
        throw std::invalid_argument("run_sweep: field must be 1 or 2");
    WeightFunction::preset(spec.weight);  // throws on unknown preset
    for (double v : spec.values) {
        if (!(v > 0.0)) throw std::invalid_argument("run_sweep: sweep values must be positive");
        if (spec.axis == SweepAxis::K && std::abs(v - std::lround(v)) > 1e-9)
            throw std::invalid_argument("run_sweep: K values must be integers");
        if (spec.axis == SweepAxis::Theta) {
            const double s = 1.0 / v;
            if (std::abs(s - std::lround(s)) > 1e-6)
                throw std::invalid_argument("run_sweep: theta values must be 1/S with integer S");
        }
    }
}

}  // namespace

ErrorTable run_sweep(const RunSpec& spec) {
    validate_spec(spec);
    const std::size_t n = spec.values.size();

    struct RowSlot {
        bool ok = false;
        ErrorRow row;
        std::string message;
    };
    std::vector<RowSlot> slots(n);

    auto run_row = [&](std::size_t i) {
        const double v = spec.values[i];
        int K = spec.num_cells, S = spec.num_nodes;
        double dt = spec.dt;
        switch (spec.axis) {
            case SweepAxis::K: K = static_cast<int>(std::lround(v)); break;
            case SweepAxis::Dt: dt = v; break;
            case SweepAxis::Theta: S = static_cast<int>(std::lround(1.0 / v)); break;
        }
        const auto start = std::chrono::steady_clock::now();
        try {
            const CaseRunResult res = run_manufactured(spec.case_id, spec.beta, K, spec.degree,
                                                       spec.T, dt, S, spec.weight,
                                                       spec.forcing_mode, spec.flux);
            slots[i].row.value = v;
            slots[i].row.l2_error = (spec.field == 2 && spec.case_id == CaseId::Ex4CoupledNls)
                                        ? res.err_u2
                                        : res.err_u1;
            slots[i].row.l2_error_u2 = res.err_u2;
            slots[i].row.walltime_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            slots[i].ok = true;
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << axis_name(spec.axis) << "=" << v << ": " << e.what();
            slots[i].message = msg.str();
        }
    };

    if (spec.jobs <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) run_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) run_row(i);
        };
        std::vector<std::thread> pool;
        const int threads = std::min<std::size_t>(spec.jobs, n);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    ErrorTable table;
    table.spec = spec;
    for (std::size_t i = 0; i < n; ++i) {
        if (slots[i].ok)
            table.rows.push_back(slots[i].row);
        else
            table.failures.push_back(slots[i].message);
    }

    if (table.rows.size() >= 2) {
        std::vector<double> errs, res;
        for (const auto& r : table.rows) {
            errs.push_back(r.l2_error);
            res.push_back(spec.axis == SweepAxis::K ? r.value : 1.0 / r.value);
        }
        const auto orders = estimate_order(errs, res);
        for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].order = orders[i];
    }
    return table;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double row_theta(const RunSpec& spec, const ErrorRow& row) {
    return spec.axis == SweepAxis::Theta ? row.value : 1.0 / spec.num_nodes;
}

double row_dt(const RunSpec& spec, const ErrorRow& row) {
    return spec.axis == SweepAxis::Dt ? row.value : spec.dt;
}

}  // namespace

void emit_csv(const ErrorTable& table, std::ostream& os) {
    os << "sweep_param,value,l2_error,order,case,beta,N,dt,theta,T,walltime_s\n";
    for (const auto& row : table.rows) {
        os << axis_name(table.spec.axis) << ',' << fmt_double(row.value) << ','
           << fmt_double(row.l2_error) << ',' << (std::isnan(row.order) ? "" : fmt_double(row.order))
           << ',' << case_name(table.spec.case_id) << ',' << fmt_double(table.spec.beta) << ','
           << table.spec.degree << ',' << fmt_double(row_dt(table.spec, row)) << ','
           << fmt_double(row_theta(table.spec, row)) << ',' << fmt_double(table.spec.T) << ','
           << fmt_double(row.walltime_s) << '\n';
    }
}

void emit_markdown(const ErrorTable& table, std::ostream& os) {
    os << "# " << case_name(table.spec.case_id) << "  beta=" << table.spec.beta
       << "  N=" << table.spec.degree << "  T=" << table.spec.T << "\n\n";
    os << "| " << axis_name(table.spec.axis) << " | L2-Error | order |\n";
    os << "|---|---|---|\n";
    char ebuf[32], vbuf[32];
    for (const auto& row : table.rows) {
        std::snprintf(ebuf, sizeof(ebuf), "%.3e", row.l2_error);
        std::snprintf(vbuf, sizeof(vbuf), "%g", row.value);
        os << "| " << vbuf << " | " << ebuf << " | ";
        if (std::isnan(row.order))
            os << "-";
        else {
            char obuf[32];
            std::snprintf(obuf, sizeof(obuf), "%.2f", row.order);
            os << obuf;
        }
        os << " |\n";
    }
}

void emit_table(const ErrorTable& table) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!table.spec.out.empty()) {
        file.open(table.spec.out);
        if (!file) throw std::runtime_error("emit_table: cannot write " + table.spec.out);
        os = &file;
    }
    if (table.spec.format == "md")
        emit_markdown(table, *os);
    else
        emit_csv(table, *os);
}

ErrorTable parse_csv(std::istream& is) {
    ErrorTable table;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("parse_csv: empty input");
    bool first_row = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 11) throw std::runtime_error("parse_csv: malformed row");
        ErrorRow row;
        row.value = std::stod(cells[1]);
        row.l2_error = std::stod(cells[2]);
        row.order = cells[3].empty() ? std::numeric_limits<double>::quiet_NaN()
                                     : std::stod(cells[3]);
        row.walltime_s = std::stod(cells[10]);
        if (first_row) {
            if (cells[0] == "K")
                table.spec.axis = SweepAxis::K;
            else if (cells[0] == "dt")
                table.spec.axis = SweepAxis::Dt;
            else
                table.spec.axis = SweepAxis::Theta;
            if (auto id = case_from_name(cells[4])) table.spec.case_id = *id;
            table.spec.beta = std::stod(cells[5]);
            table.spec.degree = std::stoi(cells[6]);
            if (table.spec.axis != SweepAxis::Dt) table.spec.dt = std::stod(cells[7]);
            if (table.spec.axis != SweepAxis::Theta)
                table.spec.num_nodes = static_cast<int>(std::lround(1.0 / std::stod(cells[8])));
            table.spec.T = std::stod(cells[9]);
            first_row = false;
        }
        table.rows.push_back(row);
        table.spec.values.push_back(row.value);
    }
    return table;
}

RunSpec parse_config(std::istream& is) {
    RunSpec spec;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        auto parse_number = [&](const std::string& s) {
            const auto slash = s.find('/');
            if (slash != std::string::npos)
                return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
            return std::stod(s);
        };

        if (key == "case") {
            auto id = case_from_name(val);
            if (!id) throw std::invalid_argument("config: unknown case " + val);
            spec.case_id = *id;
        } else if (key == "beta") {
            spec.beta = parse_number(val);
        } else if (key == "N") {
            spec.degree = std::stoi(val);
        } else if (key == "sweep") {
            if (val == "K")
                spec.axis = SweepAxis::K;
            else if (val == "dt")
                spec.axis = SweepAxis::Dt;
            else if (val == "theta")
                spec.axis = SweepAxis::Theta;
            else
                throw std::invalid_argument("config: unknown sweep axis " + val);
        } else if (key == "values") {
            spec.values.clear();
            std::stringstream ss(val);
            std::string item;
            while (std::getline(ss, item, ',')) spec.values.push_back(parse_number(trim(item)));
        } else if (key == "T") {
            spec.T = parse_number(val);
        } else if (key == "K") {
            spec.num_cells = std::stoi(val);
        } else if (key == "dt") {
            spec.dt = parse_number(val);
        } else if (key == "S") {
            spec.num_nodes = std::stoi(val);
        } else if (key == "weight") {
            spec.weight = val;
        } else if (key == "forcing") {
            if (val == "analytic")
                spec.forcing_mode = ForcingMode::Analytic;
            else if (val == "discrete")
                spec.forcing_mode = ForcingMode::DiscreteConsistent;
            else
                throw std::invalid_argument("config: unknown forcing mode " + val);
        } else if (key == "flux") {
            if (val == "left")
                spec.flux = FluxOrientation::Left;
            else if (val == "right")
                spec.flux = FluxOrientation::Right;
            else
                throw std::invalid_argument("config: unknown flux orientation " + val);
        } else if (key == "field") {
            if (val == "u1")
                spec.field = 1;
            else if (val == "u2")
                spec.field = 2;
            else
                throw std::invalid_argument("config: field must be u1 or u2");
        } else if (key == "format") {
            spec.format = val;
        } else if (key == "out") {
            spec.out = val;
        } else if (key == "jobs") {
            spec.jobs = std::stoi(val);
        } else {
            throw std::invalid_argument("config: unknown key " + key);
        }
    }
    return spec;
}

}  // namespace fracldg
