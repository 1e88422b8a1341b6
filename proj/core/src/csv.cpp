#include "tempdyn/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "tempdyn/errors.hpp"

namespace tempdyn {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_double(const std::string& field, const std::string& context) {
    double out = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last)
        throw validation_error("malformed number '" + field + "' (" + context + ")");
    return out;
}

std::optional<double> parse_optional_double(const std::string& field, const std::string& context) {
    if (field.empty())
        return std::nullopt;
    return parse_double(field, context);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw io_error("read failure on '" + path.string() + "'");
    return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw io_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out)
            throw io_error("write failure on '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw io_error("cannot rename '" + tmp.string() + "' to '" + path.string() +
                       "': " + ec.message());
}

} // namespace tempdyn
