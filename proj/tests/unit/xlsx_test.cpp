#include <gtest/gtest.h>

#include <fstream>
#include <iterator>
#include <random>

#include "lcpbridge/error.hpp"
#include "lcpbridge/xlsx.hpp"

using namespace lcpbridge;
using namespace lcpbridge::xlsx;

namespace {

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && leap(y) ? 29 : kDays[m - 1];
}

}  // namespace

TEST(Zip, RoundTripRandomPayloads) {
    std::mt19937 rng(5);
    for (int round = 0; round < 20; ++round) {
        std::vector<std::pair<std::string, std::string>> files;
        const int n = std::uniform_int_distribution<int>(0, 6)(rng);
        for (int i = 0; i < n; ++i) {
            std::string data(std::uniform_int_distribution<std::size_t>(0, 5000)(rng), '\0');
            for (auto& ch : data) ch = static_cast<char>(rng() % (i % 2 ? 4 : 256));
            files.emplace_back("dir/file" + std::to_string(i) + ".bin", data);
        }
        const auto archive = write_zip(files);
        const auto back = read_zip(archive);
        ASSERT_EQ(back.size(), files.size());
        for (const auto& [name, data] : files) EXPECT_EQ(back.at(name), data);
        EXPECT_EQ(write_zip(files), archive);
    }
}

TEST(Zip, RejectsGarbage) {
    EXPECT_THROW(read_zip("definitely not a zip archive at all"), Error);
    auto archive = write_zip({{"a.txt", "hello hello hello"}});
    archive[40] ^= 0x55;  // inside the compressed payload
    EXPECT_THROW(read_zip(archive), Error);
}

TEST(Serial, KnownValuesAndDayCountingOracle) {
    EXPECT_EQ(to_serial({2024, 1, 1}), 45292);
    EXPECT_EQ(to_serial({1899, 12, 31}), 1);
    // Walk day by day from the epoch and compare.
    Date d{1899, 12, 30};
    for (long serial = 0; serial < 80000; ++serial) {
        ASSERT_EQ(to_serial(d), serial);
        ASSERT_EQ(from_serial(serial), d);
        if (++d.day > days_in_month(d.year, d.month)) {
            d.day = 1;
            if (++d.month > 12) {
                d.month = 1;
                ++d.year;
            }
        }
    }
}

TEST(ColumnName, MatchesEnumeration) {
    // Oracle: enumerate A..Z, AA..ZZ, AAA.. in order.
    std::vector<std::string> expected;
    const std::string letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    for (char a : letters) expected.push_back(std::string(1, a));
    for (char a : letters)
        for (char b : letters) expected.push_back(std::string{a, b});
    for (char a : letters.substr(0, 2))
        for (char b : letters)
            for (char c : letters) expected.push_back(std::string{a, b, c});
    for (std::size_t i = 0; i < expected.size(); ++i) ASSERT_EQ(column_name(i), expected[i]) << i;
}

TEST(Workbook, RoundTripAllCellKinds) {
    Workbook wb;
    Sheet s{"Book", {}, {}};
    s.rows.push_back({std::string("title"), std::string("pages"), std::string("ok"), std::string("when"),
                      std::string("stamp"), std::string("price")});
    s.rows.push_back({std::string("A <b> & \"c\""), 12.0, true, Date{2023, 2, 28}, DateTime{{2020, 12, 31}, 23, 59, 1},
                      2.5});
    s.rows.push_back({std::monostate{}, -3.0, false, Date{1999, 1, 1}, DateTime{{2000, 1, 1}, 0, 0, 0}, 1e-7});
    s.validations.push_back({"C2:C1048576", "\"TRUE,FALSE\""});
    s.validations.push_back({"A2:A1048576", "Author!$A$2:$A$1048576"});
    wb.sheets.push_back(s);
    wb.sheets.push_back({"Author", {{std::string("name")}}, {}});

    const auto bytes = write_workbook(wb);
    EXPECT_EQ(write_workbook(wb), bytes);
    const auto back = read_workbook(bytes);
    ASSERT_EQ(back.sheets.size(), 2u);
    EXPECT_EQ(back.sheets[0].name, "Book");
    EXPECT_EQ(back.sheets[0].validations, s.validations);
    ASSERT_EQ(back.sheets[0].rows.size(), 3u);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < s.rows[r].size(); ++c) {
            const auto& got = c < back.sheets[0].rows[r].size() ? back.sheets[0].rows[r][c] : Cell{};
            EXPECT_EQ(got, s.rows[r][c]) << r << "," << c;
        }
    }
    EXPECT_EQ(cell_text(back.sheets[0].rows[1][3]), "28/02/2023");
    EXPECT_EQ(cell_text(back.sheets[0].rows[1][4]), "31/12/2020 23:59:01");
    EXPECT_EQ(cell_text(back.sheets[0].rows[2][4]), "01/01/2000 00:00");
    EXPECT_EQ(cell_text(back.sheets[0].rows[1][1]), "12");
    EXPECT_EQ(cell_text(back.sheets[0].rows[1][5]), "2.5");
    EXPECT_EQ(cell_text(back.sheets[0].rows[1][2]), "TRUE");
}

TEST(Workbook, SheetNameLimits) {
    EXPECT_THROW(write_workbook({{{std::string(32, 'x'), {}, {}}}}), Error);
    EXPECT_THROW(write_workbook({{{"A", {}, {}}, {"A", {}, {}}}}), Error);
    EXPECT_NO_THROW(write_workbook({{{std::string(31, 'x'), {}, {}}}}));
}

TEST(Workbook, ReadsForeignWorkbooks) {
    auto slurp = [](const char* path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const auto a = read_workbook(slurp(LCPB_FIXTURES "/foreign.xlsx"));
    ASSERT_EQ(a.sheets.size(), 2u);
    EXPECT_EQ(a.sheets[0].name, "Book");
    EXPECT_EQ(cell_text(a.sheets[0].rows[1][2]), "01/08/1965");
    EXPECT_EQ(cell_text(a.sheets[0].rows[1][3]), "9.99");
    EXPECT_EQ(cell_text(a.sheets[0].rows[2][4]), "FALSE");
    EXPECT_EQ(cell_text(a.sheets[1].rows[1][1]), "08/10/1920 07:30");

    const auto b = read_workbook(slurp(LCPB_FIXTURES "/shared-strings.xlsx"));
    ASSERT_EQ(b.sheets.size(), 1u);
    ASSERT_EQ(b.sheets[0].rows.size(), 4u);
    EXPECT_EQ(cell_text(b.sheets[0].rows[1][0]), "Ada Lovelace");
    EXPECT_EQ(cell_text(b.sheets[0].rows[1][1]), "04/03/2021");
    EXPECT_TRUE(b.sheets[0].rows[2].empty());
    EXPECT_EQ(cell_text(b.sheets[0].rows[3][0]), "caf\xc3\xa9 & co");
}
