#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"

using namespace tvl;

TEST_CASE("compiling the trajectory map query injects both constraints") {
    AreaRegistry reg = testutil::fixture_registry();
    TvlQuery q = testutil::fig7_query();
    CompiledSql c = compile_to_sql(q, reg);

    REQUIRE(c.injected_predicates.size() == 2);
    const std::string& spatial = c.injected_predicates[0];
    const std::string& temporal = c.injected_predicates[1];
    CHECK(spatial.rfind("ST_Within(ST_Point(longitude, latitude), ST_GeomFromText('POLYGON((", 0) ==
          0);
    CHECK(spatial.find(polygon_wkt(reg.find("Miyun District, Beijing")->polygon)) !=
          std::string::npos);
    CHECK(temporal == "datetime BETWEEN '2010-03-22 09:00:00' AND '2012-05-04 21:01:00'");

    // exactly one WHERE clause, AND-joined, each injected predicate once
    std::string expected_where = " WHERE " + spatial + " AND " + temporal + " ";
    CHECK(c.text.find(expected_where) != std::string::npos);
    CHECK(c.text.find(spatial) == c.text.rfind(spatial));
    size_t where_count = 0;
    for (size_t p = c.text.find("WHERE"); p != std::string::npos; p = c.text.find("WHERE", p + 1))
        ++where_count;
    CHECK(where_count == 1);

    // the base ORDER BY follows verbatim, after the WHERE clause
    size_t order_at = c.text.find("ORDER BY user_id, traj_id, datetime");
    REQUIRE(order_at != std::string::npos);
    CHECK(order_at > c.text.find("WHERE"));
    CHECK(c.text.rfind("ORDER BY user_id, traj_id, datetime") == order_at);
    CHECK(c.dialect == "postgis-like");
}

TEST_CASE("no constraints means passthrough text") {
    AreaRegistry reg = testutil::fixture_registry();
    TvlQuery q = parse_tvl("VISUALIZE line SQL SELECT datetime, altitude FROM traj_data");
    CompiledSql c = compile_to_sql(q, reg);
    CHECK(c.injected_predicates.empty());
    CHECK(c.text == render_skeleton(q.sql));
}

TEST_CASE("extra predicates follow the injected ones in canonical order") {
    AreaRegistry reg = testutil::fixture_registry();
    TvlQuery q = testutil::fig7_query();
    q.sql.extra_where.push_back(
        Predicate{"user_id", Cmp::Le, Literal::scalar(Scalar{int64_t{5}})});
    q.sql.extra_where.push_back(
        Predicate{"travel_mode", Cmp::Eq, Literal::scalar(Scalar{std::string("walk")})});
    CompiledSql c = compile_to_sql(q, reg);
    size_t spatial_at = c.text.find("ST_Within");
    size_t temporal_at = c.text.find("datetime BETWEEN");
    size_t mode_at = c.text.find("travel_mode = 'walk'");
    size_t user_at = c.text.find("user_id <= 5");
    REQUIRE(spatial_at != std::string::npos);
    REQUIRE(temporal_at != std::string::npos);
    REQUIRE(mode_at != std::string::npos);
    REQUIRE(user_at != std::string::npos);
    CHECK(spatial_at < temporal_at);
    CHECK(temporal_at < mode_at);   // canonical predicate order: travel_mode < user_id
    CHECK(mode_at < user_at);
}

TEST_CASE("compilation is idempotent") {
    AreaRegistry reg = testutil::fixture_registry();
    std::mt19937_64 rng(5150);
    for (int i = 0; i < 50; ++i) {
        TvlQuery q = random_query(rng);
        CHECK(compile_to_sql(q, reg).text == compile_to_sql(q, reg).text);
    }
}

TEST_CASE("unknown area and missing bindings raise compile errors") {
    AreaRegistry reg = testutil::fixture_registry();
    TvlQuery q = testutil::fig7_query();
    q.area = AreaRef{"Atlantis, Nowhere"};
    try {
        compile_to_sql(q, reg);
        FAIL();
    } catch (const CompileError& e) {
        CHECK(e.code == CompileError::Code::UnknownArea);
    }

    CHECK(geometry_binding("traj_data").datetime_column == "datetime");
    CHECK(geometry_binding("traj_data").point_expr() == "ST_Point(longitude, latitude)");
    try {
        geometry_binding("unknown_table");
        FAIL();
    } catch (const CompileError& e) {
        CHECK(e.code == CompileError::Code::UnknownTable);
    }
    try {
        geometry_binding("traj_labels");  // registered but carries no geometry
        FAIL();
    } catch (const CompileError& e) {
        CHECK(e.code == CompileError::Code::MissingGeometryColumn);
    }
}

TEST_CASE("joined queries take the binding from the FROM table") {
    AreaRegistry reg = testutil::fixture_registry();
    TvlQuery q = parse_tvl(
        "VISUALIZE bar AREA \"Miyun District, Beijing\" "
        "TIME \"2010-01-01 00:00:00\" TO \"2011-01-01 00:00:00\" "
        "SQL SELECT traj_labels.travel_mode, COUNT(*) AS cnt FROM traj_data "
        "JOIN traj_labels ON traj_data.traj_id = traj_labels.traj_id "
        "GROUP BY traj_labels.travel_mode");
    CompiledSql c = compile_to_sql(q, reg);
    CHECK(c.text.find("ST_Point(longitude, latitude)") != std::string::npos);
    CHECK(c.text.find("datetime BETWEEN") != std::string::npos);
    // executing the join template works end to end
    TrajStore store = testutil::fixture_store();
    CHECK_NOTHROW(execute(c, store, reg));
}

TEST_CASE("rows exactly on the window anchors are retained") {
    AreaRegistry reg = testutil::fixture_registry();
    TrajStore store = testutil::fixture_store();
    // fixture rows exist at both anchors: 2010-03-22 09:00:00 and 2012-05-04 21:01:00
    CompiledSql c = compile_to_sql(testutil::fig7_query(), reg);
    ResultTable r = execute(c, store, reg);
    bool at_st = false, at_et = false;
    size_t dt = 4;  // datetime column
    for (const auto& row : r.rows) {
        std::string t = format_value(row[dt]);
        at_st |= t == "2010-03-22 09:00:00";
        at_et |= t == "2012-05-04 21:01:00";
    }
    CHECK(at_st);
    CHECK(at_et);
}

TEST_CASE("adding constraints never enlarges the result") {
    AreaRegistry reg = testutil::fixture_registry();
    TrajStore store = testutil::synthetic_store(2000, 8);
    std::mt19937_64 rng(61);
    for (int i = 0; i < 40; ++i) {
        TvlQuery q = random_query(rng);
        if (q.sql.has_aggregates() || (q.sql.transform && !q.sql.transform->empty()))
            continue;  // monotonicity is a row-set property of plain filters
        TvlQuery bare = q;
        bare.area.reset();
        bare.time = TimeWindow{};
        if (bare.vis == VisType::Map) bare.vis = VisType::Line;
        size_t n_bare = execute(compile_to_sql(bare, reg), store, reg).rows.size();
        if (q.time.present()) {
            TvlQuery timed = bare;
            timed.time = q.time;
            CHECK(execute(compile_to_sql(timed, reg), store, reg).rows.size() <= n_bare);
        }
        if (q.area) {
            TvlQuery fenced = bare;
            fenced.area = q.area;
            CHECK(execute(compile_to_sql(fenced, reg), store, reg).rows.size() <= n_bare);
        }
    }
}
