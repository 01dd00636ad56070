#include "bslab/report.hpp"

#include <filesystem>
#include <map>
#include <utility>
#include <vector>
#include <fstream>
#include <sstream>

#include "bslab/errors.hpp"

namespace bslab {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string leaf_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

/// Leaves as (JSON pointer, value); empty containers stay leaves.
void flatten_into(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, const Json*>>& out) {
  if (v.is_object() && !v.empty()) {
    for (const auto& item : v.items()) flatten_into(item.value(), prefix + "/" + escape_token(item.key()), out);
  } else if (v.is_array() && !v.empty()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten_into(v[i], prefix + "/" + std::to_string(i), out);
  } else {
    out.emplace_back(prefix, &v);
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

ReportFormat parse_format(const std::string& name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "plotdata") return ReportFormat::PlotData;
  throw ConfigError("unknown format \"" + name + "\" (expected json, csv or plotdata)");
}

std::string to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::Json: return "json";
    case ReportFormat::Csv: return "csv";
    case ReportFormat::PlotData: return "plotdata";
  }
  return "?";
}

std::string render_json(const Json& report) { return report.dump(2) + "\n"; }

std::string render_csv(const Json& report) {
  std::ostringstream os;
  os << "experiment,type,pointer,value\n";
  for (const auto& item : report.items()) {
    if (item.key() == "experiments") continue;
    std::vector<std::pair<std::string, const Json*>> leaves;
    flatten_into(item.value(), "/" + escape_token(item.key()), leaves);
    for (const auto& [ptr, v] : leaves) os << "-1,report," << csv_field(ptr) << "," << csv_field(leaf_text(*v)) << "\n";
  }
  if (report.contains("experiments")) {
    const Json& ex = report["experiments"];
    for (std::size_t i = 0; i < ex.size(); ++i) {
      std::string type = ex[i].value("type", "");
      std::vector<std::pair<std::string, const Json*>> leaves;
      flatten_into(ex[i], "", leaves);
      for (const auto& [ptr, v] : leaves) {
        os << i << "," << csv_field(type) << "," << csv_field(ptr) << "," << csv_field(leaf_text(*v)) << "\n";
      }
    }
  }
  return os.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

PlotData render_plotdata(const Json& report) {
  PlotData pd;
  std::ostringstream ob, sc;
  ob << "# m count total_length bound\n";
  sc << "# source target\n";
  bool first_ob = true, first_sc = true;
  if (report.contains("experiments")) {
    for (const auto& e : report["experiments"]) {
      if (!e.contains("result") || e["result"].is_null()) continue;
      const Json& r = e["result"];
      if (e["type"] == "obstruction" && r.contains("theoretical_series")) {
        if (!first_ob) ob << "\n\n";
        first_ob = false;
        std::map<int, std::string> totals;
        for (const auto& row : r["rows"]) totals[row["m"].get<int>()] = row["total_length"].get<std::string>();
        for (const auto& t : r["theoretical_series"]) {
          int m = t["m"].get<int>();
          auto it = totals.find(m);
          ob << m << " " << t["count"].get<std::string>() << " " << (it == totals.end() ? "nan" : it->second) << " "
             << t["bound"].get<std::string>() << "\n";
        }
      } else if (e["type"] == "semiconjugacy" && r.contains("result") && !r["result"].is_null()) {
        if (!first_sc) sc << "\n\n";
        first_sc = false;
        for (const auto& s : r["result"]["table"]) sc << s[2].get<std::string>() << " " << s[3].get<std::string>() << "\n";
      }
    }
  }
  pd.obstruction = ob.str();
  pd.semiconjugacy = sc.str();
  return pd;
}

std::vector<std::string> emit_report(const Json& report, ReportFormat format, const std::string& dir,
                                     const std::string& stem) {
  std::filesystem::path base(dir);
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    std::filesystem::path p = base / name;
    write_file(p, text);
    written.push_back(p.string());
  };
  switch (format) {
    case ReportFormat::Json: put(stem + ".json", render_json(report)); break;
    case ReportFormat::Csv: put(stem + ".csv", render_csv(report)); break;
    case ReportFormat::PlotData: {
      PlotData pd = render_plotdata(report);
      put(stem + ".obstruction.dat", pd.obstruction);
      put(stem + ".semiconjugacy.dat", pd.semiconjugacy);
      break;
    }
  }
  return written;
}

}  // namespace bslab
