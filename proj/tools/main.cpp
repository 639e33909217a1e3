// censtail command line tool: estimation, simulation tables, threshold
// selection and censoring-proportion paths for right-censored tail data.
// Talks to the library exclusively through the C interface.

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "censtail.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitImpossible = 3;

struct SurvivalData {
    std::vector<double> time;
    std::vector<int> status;
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Reads `time,status` CSV; status 1 = event observed, 0 = right censored.
// Exits with code 2 and a line-numbered message on malformed input.
SurvivalData read_survival_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open " << path << "\n";
        std::exit(kExitUsage);
    }
    SurvivalData data;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (line_no == 1) {
            std::string header = trim(line);
            for (auto& c : header) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
            if (header != "time,status") {
                std::cerr << path << ":1: expected header 'time,status', got '" << trim(line)
                          << "'\n";
                std::exit(kExitUsage);
            }
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            std::cerr << path << ":" << line_no << ": expected 'time,status' row\n";
            std::exit(kExitUsage);
        }
        const std::string time_field = trim(line.substr(0, comma));
        const std::string status_field = trim(line.substr(comma + 1));
        char* end = nullptr;
        const double t = std::strtod(time_field.c_str(), &end);
        if (end == time_field.c_str() || *end != '\0' || !std::isfinite(t) || t <= 0.0) {
            std::cerr << path << ":" << line_no << ": invalid time '" << time_field << "'\n";
            std::exit(kExitUsage);
        }
        if (status_field != "0" && status_field != "1") {
            std::cerr << path << ":" << line_no << ": invalid status '" << status_field
                      << "' (must be 0 or 1)\n";
            std::exit(kExitUsage);
        }
        data.time.push_back(t);
        data.status.push_back(status_field == "1" ? 1 : 0);
    }
    if (data.time.empty()) {
        std::cerr << "error: " << path << " contains no data rows\n";
        std::exit(kExitUsage);
    }
    return data;
}

[[noreturn]] void fail_status(ct_status status) {
    std::cerr << "error: " << ct_error_message() << "\n";
    std::exit(status == CT_E_FULLY_CENSORED ? kExitImpossible : kExitUsage);
}

ct_sample* load_sample(const std::string& path) {
    const SurvivalData data = read_survival_csv(path);
    ct_sample* sample = nullptr;
    const ct_status st =
        ct_sample_new(data.time.data(), data.status.data(), data.time.size(), &sample);
    if (st != CT_OK) fail_status(st);
    return sample;
}

std::vector<ct_estimator> parse_estimators(const std::string& list) {
    std::vector<ct_estimator> out;
    if (list == "all") {
        for (int e = 0; e < CT_EST_COUNT; ++e) out.push_back(static_cast<ct_estimator>(e));
        return out;
    }
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        ct_estimator e;
        if (ct_estimator_from_name(item.c_str(), &e) != CT_OK) {
            std::cerr << "error: " << ct_error_message() << "\n";
            std::exit(kExitUsage);
        }
        out.push_back(e);
    }
    if (out.empty()) {
        std::cerr << "error: empty estimator list\n";
        std::exit(kExitUsage);
    }
    return out;
}

std::string full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int resolve_k(const ct_sample* sample, int k, double k_frac) {
    const auto n = ct_sample_size(sample);
    if (k > 0 && k_frac > 0.0) {
        std::cerr << "error: give either --k or --k-frac, not both\n";
        std::exit(kExitUsage);
    }
    if (k_frac > 0.0) k = static_cast<int>(std::floor(k_frac * static_cast<double>(n)));
    if (k < 1 || static_cast<std::size_t>(k) > n - 1) {
        std::cerr << "error: k = " << k << " outside 1..n-1 for n = " << n << "\n";
        std::exit(kExitUsage);
    }
    return k;
}

int cmd_estimate(const std::string& input, int k_arg, double k_frac,
                 const std::string& estimators, const std::string& format) {
    ct_sample* sample = load_sample(input);
    const int k = resolve_k(sample, k_arg, k_frac);
    const auto ids = parse_estimators(estimators);

    double p_hat = 0.0;
    if (const ct_status st = ct_p_hat(sample, k, &p_hat); st != CT_OK) fail_status(st);

    struct Row {
        ct_estimator id;
        ct_estimate_result result;
        ct_status status;
    };
    std::vector<Row> rows;
    int failures = 0;
    bool fully_censored = false;
    for (const auto id : ids) {
        Row row;
        row.id = id;
        row.status = ct_estimate(sample, id, k, &row.result);
        if (row.status != CT_OK) {
            ++failures;
            if (row.status == CT_E_FULLY_CENSORED) fully_censored = true;
            std::cerr << ct_estimator_name(id) << ": " << ct_error_message() << "\n";
        }
        rows.push_back(row);
    }
    ct_sample_free(sample);
    if (failures == static_cast<int>(rows.size())) {
        std::cerr << "error: every requested estimator failed\n";
        return fully_censored ? kExitImpossible : kExitUsage;
    }

    const char* aux_names[4] = {"sigma", "b", "rho", "beta"};
    const unsigned aux_bits[4] = {CT_AUX_SIGMA, CT_AUX_B, CT_AUX_RHO, CT_AUX_BETA};
    const auto aux_value = [](const ct_estimate_result& r, unsigned bit) {
        switch (bit) {
            case CT_AUX_SIGMA: return r.sigma;
            case CT_AUX_B: return r.b;
            case CT_AUX_RHO: return r.rho;
            default: return r.beta;
        }
    };

    if (format == "csv") {
        std::cout << "estimator,k,raw,adapted,sigma,b,rho,beta\n";
        for (const auto& row : rows) {
            if (row.status != CT_OK) continue;
            std::cout << ct_estimator_cli_name(row.id) << "," << row.result.k << ","
                      << full(row.result.raw) << "," << full(row.result.adapted);
            for (int a = 0; a < 4; ++a)
                std::cout << ","
                          << ((row.result.aux_mask & aux_bits[a])
                                  ? full(aux_value(row.result, aux_bits[a]))
                                  : "");
            std::cout << "\n";
        }
    } else if (format == "json") {
        nlohmann::json doc;
        doc["k"] = k;
        doc["p_hat"] = p_hat;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& row : rows) {
            nlohmann::json j;
            j["estimator"] = ct_estimator_cli_name(row.id);
            if (row.status == CT_OK) {
                j["raw"] = row.result.raw;
                j["adapted"] = row.result.adapted;
                for (int a = 0; a < 4; ++a)
                    if (row.result.aux_mask & aux_bits[a])
                        j[aux_names[a]] = aux_value(row.result, aux_bits[a]);
                j["converged"] = row.result.converged != 0;
            } else {
                j["error"] = ct_status_name(row.status);
            }
            arr.push_back(j);
        }
        doc["estimates"] = arr;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::printf("k = %d   p_hat = %s\n", k, fixed6(p_hat).c_str());
        std::printf("%-10s %12s %12s %37s\n", "estimator", "raw", "adapted", "aux");
        for (const auto& row : rows) {
            if (row.status != CT_OK) {
                std::printf("%-10s %12s %12s   (%s)\n", ct_estimator_name(row.id), "-", "-",
                            ct_status_name(row.status));
                continue;
            }
            std::string aux;
            for (int a = 0; a < 4; ++a)
                if (row.result.aux_mask & aux_bits[a])
                    aux += std::string(aux.empty() ? "" : "  ") + aux_names[a] + "=" +
                           fixed6(aux_value(row.result, aux_bits[a]));
            std::printf("%-10s %12s %12s   %s\n", ct_estimator_name(row.id),
                        fixed6(row.result.raw).c_str(), fixed6(row.result.adapted).c_str(),
                        aux.c_str());
        }
    }
    return 0;
}

int cmd_simulate(const std::string& dist, double gamma1, double censor_p, std::size_t n,
                 double k_frac, int reps, int boot, double alpha, int d, std::uint64_t seed,
                 const std::string& estimators, const std::string& format, int workers,
                 bool median_length) {
    int family;
    if (dist == "burr")
        family = CT_DIST_BURR;
    else if (dist == "pareto")
        family = CT_DIST_PARETO;
    else if (dist == "frechet")
        family = CT_DIST_FRECHET;
    else {
        std::cerr << "error: unknown distribution '" << dist << "'\n";
        return kExitUsage;
    }

    ct_study_config config{};
    if (const ct_status st = ct_model_from_gamma(family, gamma1, &config.model); st != CT_OK)
        fail_status(st);
    config.censor_p = censor_p;
    config.n = n;
    config.k_fraction = k_frac;
    config.repetitions = reps;
    config.bootstrap_replicates = boot;
    config.alpha = alpha;
    config.d = d;
    config.seed = seed;
    config.workers = workers;
    config.median_length = median_length ? 1 : 0;

    const auto ids = parse_estimators(estimators);
    std::vector<ct_study_row> rows(ids.size());
    if (const ct_status st = ct_run_study(&config, ids.data(), ids.size(), rows.data());
        st != CT_OK)
        fail_status(st);

    ct_format f = CT_FORMAT_TEXT;
    if (format == "csv") f = CT_FORMAT_CSV;
    if (format == "json") f = CT_FORMAT_JSON;
    char* table = nullptr;
    if (const ct_status st = ct_format_study_table(rows.data(), rows.size(), f, &table);
        st != CT_OK)
        fail_status(st);
    std::cout << table;
    ct_string_free(table);
    return 0;
}

int cmd_kopt(const std::string& input, const std::string& estimators, int k_min, int k_max,
             const std::string& format, bool with_paths) {
    ct_sample* sample = load_sample(input);
    const auto ids = parse_estimators(estimators);
    const auto n = ct_sample_size(sample);
    if (k_min < 1 || k_max < k_min || static_cast<std::size_t>(k_max) > n - 1) {
        std::cerr << "error: k range must satisfy 1 <= k-min <= k-max <= n-1 (n = " << n
                  << ")\n";
        ct_sample_free(sample);
        return kExitUsage;
    }

    const std::size_t width = static_cast<std::size_t>(k_max - k_min + 1);
    std::vector<double> objective(width);
    std::vector<double> estimates(width * ids.size());
    int selected = 0;
    const ct_status st = ct_kopt(sample, ids.data(), ids.size(), k_min, k_max, &selected,
                                 objective.data(), estimates.data());
    ct_sample_free(sample);
    if (st != CT_OK) fail_status(st);

    if (format == "json") {
        nlohmann::json doc;
        doc["k_opt"] = selected;
        nlohmann::json path = nlohmann::json::array();
        for (std::size_t col = 0; col < width; ++col) {
            nlohmann::json j;
            j["k"] = k_min + static_cast<int>(col);
            j["objective"] =
                std::isfinite(objective[col]) ? nlohmann::json(objective[col]) : nlohmann::json();
            if (with_paths) {
                nlohmann::json ests;
                for (std::size_t e = 0; e < ids.size(); ++e) {
                    const double v = estimates[e * width + col];
                    ests[ct_estimator_cli_name(ids[e])] =
                        std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
                }
                j["estimates"] = ests;
            }
            path.push_back(j);
        }
        doc["path"] = path;
        std::cout << doc.dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << "k,objective,selected";
        if (with_paths)
            for (const auto id : ids) std::cout << "," << ct_estimator_cli_name(id);
        std::cout << "\n";
        for (std::size_t col = 0; col < width; ++col) {
            const int k = k_min + static_cast<int>(col);
            std::cout << k << "," << (std::isfinite(objective[col]) ? full(objective[col]) : "")
                      << "," << (k == selected ? 1 : 0);
            if (with_paths)
                for (std::size_t e = 0; e < ids.size(); ++e) {
                    const double v = estimates[e * width + col];
                    std::cout << "," << (std::isfinite(v) ? full(v) : "");
                }
            std::cout << "\n";
        }
    } else {
        std::printf("k_opt = %d (searched %d..%d over %zu estimators)\n", selected, k_min,
                    k_max, ids.size());
        if (with_paths) {
            std::printf("%6s %12s", "k", "objective");
            for (const auto id : ids) std::printf(" %10s", ct_estimator_name(id));
            std::printf("\n");
            for (std::size_t col = 0; col < width; ++col) {
                std::printf("%6d %12s", k_min + static_cast<int>(col),
                            fixed6(objective[col]).c_str());
                for (std::size_t e = 0; e < ids.size(); ++e)
                    std::printf(" %10s", fixed6(estimates[e * width + col]).c_str());
                std::printf("\n");
            }
        }
    }
    return 0;
}

int cmd_censor_path(const std::string& input, const std::string& format) {
    ct_sample* sample = load_sample(input);
    const auto n = ct_sample_size(sample);
    if (n < 2) {
        std::cerr << "error: censoring path needs at least 2 observations\n";
        ct_sample_free(sample);
        return kExitUsage;
    }

    std::vector<double> p_hat(n - 1);
    for (std::size_t k = 1; k <= n - 1; ++k) {
        if (const ct_status st = ct_p_hat(sample, static_cast<int>(k), &p_hat[k - 1]);
            st != CT_OK) {
            ct_sample_free(sample);
            fail_status(st);
        }
    }
    ct_sample_free(sample);

    if (format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (std::size_t k = 1; k <= n - 1; ++k)
            arr.push_back({{"k", k}, {"p_hat", p_hat[k - 1]}});
        std::cout << arr.dump(2) << "\n";
    } else {
        std::cout << "k,p_hat\n";
        for (std::size_t k = 1; k <= n - 1; ++k)
            std::cout << k << "," << full(p_hat[k - 1]) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extreme value index estimation under random right censoring"};
    app.require_subcommand(1);

    std::string input, estimators = "all", format = "text", dist = "burr";
    std::size_t n = 1000;
    int k = 0, k_min = 0, k_max = 0, reps = 200, boot = 200, d = 1, workers = 0;
    double k_frac = 0.0, gamma1 = 0.5, censor_p = 0.1, alpha = 0.05;
    std::uint64_t seed = 0;
    bool with_paths = false, median_length = false;

    auto* estimate = app.add_subcommand("estimate", "tail index estimates at a fixed k");
    estimate->add_option("input", input, "survival CSV (time,status)")->required();
    estimate->add_option("--k", k, "number of top order statistics");
    estimate->add_option("--k-frac", k_frac, "k as a fraction of n (floor)");
    estimate->add_option("--estimators", estimators, "comma list or 'all'");
    estimate->add_option("--format", format, "text|csv|json");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage study");
    simulate->add_option("--dist", dist, "burr|pareto|frechet")->required();
    simulate->add_option("--gamma1", gamma1, "true extreme value index")->required();
    simulate->add_option("--censor", censor_p, "right-tail censoring proportion")->required();
    simulate->add_option("--n", n, "sample size");
    simulate->add_option("--k-frac", k_frac, "k as a fraction of n")->required();
    simulate->add_option("--reps", reps, "repetitions R");
    simulate->add_option("--boot", boot, "bootstrap replicates B");
    simulate->add_option("--alpha", alpha, "1 - confidence level");
    simulate->add_option("--d", d, "minority observations per block");
    simulate->add_option("--seed", seed, "PRNG seed")->required();
    simulate->add_option("--estimators", estimators, "comma list or 'all'");
    simulate->add_option("--format", format, "text|csv|json");
    simulate->add_option("--workers", workers, "worker threads (0 = auto)");
    simulate->add_flag("--median-length", median_length, "median interval length instead of mean");

    auto* kopt = app.add_subcommand("kopt", "heuristic threshold selection");
    kopt->add_option("input", input, "survival CSV (time,status)")->required();
    kopt->add_option("--estimators", estimators, "comma list (>= 2 estimators)");
    kopt->add_option("--k-min", k_min, "smallest k")->required();
    kopt->add_option("--k-max", k_max, "largest k")->required();
    kopt->add_option("--format", format, "text|csv|json");
    kopt->add_flag("--paths", with_paths, "emit per-k estimate paths");

    auto* censor_path = app.add_subcommand("censor-path", "noncensored proportion per k");
    censor_path->add_option("input", input, "survival CSV (time,status)")->required();
    censor_path->add_option("--format", format, "csv|json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;  // usage problems exit with 2
    }

    if (estimate->parsed()) return cmd_estimate(input, k, k_frac, estimators, format);
    if (simulate->parsed())
        return cmd_simulate(dist, gamma1, censor_p, n, k_frac, reps, boot, alpha, d, seed,
                            estimators, format, workers, median_length);
    if (kopt->parsed()) return cmd_kopt(input, estimators, k_min, k_max, format, with_paths);
    if (censor_path->parsed()) return cmd_censor_path(input, format);
    return kExitUsage;
}
