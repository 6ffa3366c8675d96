#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace nearres {

inline std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// comma-separated, header row, LF endings, floats at 17 significant digits
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns) {
    fp_ = std::fopen(path.c_str(), "wb");
    if (!fp_) throw std::runtime_error("cannot open " + path);
    write_cells(columns);
  }
  ~CsvWriter() {
    if (fp_) std::fclose(fp_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  class Row {
   public:
    explicit Row(CsvWriter& w) : w_(w) {}
    Row& col(double x) {
      cells_.push_back(format_g17(x));
      return *this;
    }
    Row& col(long long x) {
      cells_.push_back(std::to_string(x));
      return *this;
    }
    Row& col(int x) {
      cells_.push_back(std::to_string(x));
      return *this;
    }
    Row& col(const std::string& s) {
      cells_.push_back(s);
      return *this;
    }
    ~Row() { w_.write_cells(cells_); }

   private:
    CsvWriter& w_;
    std::vector<std::string> cells_;
  };

  Row row() { return Row(*this); }

 private:
  friend class Row;
  void write_cells(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line.push_back(',');
      line += cells[i];
    }
    line.push_back('\n');
    std::fwrite(line.data(), 1, line.size(), fp_);
  }
  std::FILE* fp_ = nullptr;
};

}  // namespace nearres
