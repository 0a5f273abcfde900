#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hibbo/bo_loop.hpp"
#include "hibbo/errors.hpp"

namespace hibbo::bo {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_jsonl(const RunRecord& r) {
    std::string out;
    out.reserve(64 + r.queries.size() * (32 + 20 * r.dim));
    {
        char head[256];
        std::snprintf(head, sizeof head,
                      "{\"record\":\"hibbo-run\",\"version\":1,\"problem\":\"%s\","
                      "\"method\":\"%s\",\"seed\":%" PRIu64 ",\"config_hash\":\"%016" PRIx64
                      "\",\"budget\":%zu,\"dim\":%zu,\"latent_dim\":%zu}\n",
                      r.problem.c_str(), r.method.c_str(), r.seed, r.config_hash,
                      r.budget, r.dim, r.latent_dim);
        out += head;
    }
    for (const QueryRecord& q : r.queries) {
        out += "{\"query\":" + std::to_string(q.index);
        out += ",\"round\":" + std::to_string(q.round);
        out += q.initial ? ",\"initial\":true" : ",\"initial\":false";
        out += ",\"x\":[";
        for (std::size_t j = 0; j < q.x.size(); ++j) {
            if (j) out += ',';
            out += format_g17(q.x[j]);
        }
        out += "],\"f\":" + format_g17(q.objective);
        out += ",\"best\":" + format_g17(q.best_so_far);
        out += ",\"acq\":" + format_g17(q.acquisition_value);
        out += "}\n";
    }
    return out;
}

RunRecord parse_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw RuntimeFailure("parse_jsonl: empty record");
    nlohmann::json head = nlohmann::json::parse(line);
    if (head.value("record", "") != "hibbo-run")
        throw RuntimeFailure("parse_jsonl: not a hibbo-run record");

    RunRecord r;
    r.problem = head.at("problem").get<std::string>();
    r.method = head.at("method").get<std::string>();
    r.seed = head.at("seed").get<std::uint64_t>();
    r.config_hash = std::stoull(head.at("config_hash").get<std::string>(), nullptr, 16);
    r.budget = head.at("budget").get<std::size_t>();
    r.dim = head.at("dim").get<std::size_t>();
    r.latent_dim = head.at("latent_dim").get<std::size_t>();

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        QueryRecord q;
        q.index = j.at("query").get<std::size_t>();
        q.round = j.at("round").get<std::size_t>();
        q.initial = j.at("initial").get<bool>();
        q.x = j.at("x").get<Vector>();
        q.objective = j.at("f").get<double>();
        q.best_so_far = j.at("best").get<double>();
        q.acquisition_value = j.at("acq").get<double>();
        r.queries.push_back(std::move(q));
    }
    return r;
}

void write_record_file(const RunRecord& record, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RuntimeFailure("write_record_file: cannot open " + path);
    out << to_jsonl(record);
    if (!out) throw RuntimeFailure("write_record_file: write failed for " + path);
}

RunRecord read_record_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RuntimeFailure("read_record_file: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_jsonl(ss.str());
}

}  // namespace hibbo::bo
