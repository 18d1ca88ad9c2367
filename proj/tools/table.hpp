#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

// Row-oriented output table rendered as RFC-4180 CSV (12 significant
// digits) or as a JSON array of objects.
class Table {
public:
    using Cell = std::variant<double, long long, std::string>;

    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }
    std::size_t size() const { return rows_.size(); }

    void write_csv(std::ostream& os) const {
        write_line(os, header_);
        std::vector<std::string> text;
        for (const auto& row : rows_) {
            text.clear();
            for (const auto& c : row) text.push_back(format(c));
            write_line(os, text);
        }
    }

    nlohmann::json to_json() const {
        auto arr = nlohmann::json::array();
        for (const auto& row : rows_) {
            nlohmann::json obj;
            for (std::size_t i = 0; i < row.size() && i < header_.size(); ++i)
                std::visit([&](const auto& x) { obj[header_[i]] = x; }, row[i]);
            arr.push_back(obj);
        }
        return arr;
    }

    static std::string format(const Cell& c) {
        if (const auto* d = std::get_if<double>(&c)) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.12g", *d);
            return buf;
        }
        if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
        return std::get<std::string>(c);
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            os << quote(fields[i]);
        }
        os << "\r\n";
    }

    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    }

    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};
