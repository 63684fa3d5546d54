//! Shared corpus of specification sources. Spans rules, functions, metrics,
//! time routines, characteristics, sensors, templates and the grid-step
//! header, with operator and layout variety.

pub const SPECS: &[&str] = &[
    // Conditional rule over a shift routine and two characteristics.
    "sensor i1 numeric\n\
     sensor i2 numeric\n\
     sensor i3 numeric\n\
     sensor i4 numeric\n\
     timeroutine StandardShiftOperation {\n\
         dayofweek Monday-Friday\n\
         hour 8-17\n\
     }\n\
     characteristic Characteristic1 {\n\
         x i1\n\
         y i2\n\
         lower (-20, 18) (35, 20)\n\
         upper (-20, 24) (35, 27)\n\
     }\n\
     characteristic Characteristic2 {\n\
         x i3\n\
         y i2\n\
         upper (-20, 22) (35, 26)\n\
     }\n\
     rule OperatingBand context(i1, i2, i3, i4) {\n\
         IF StandardShiftOperation AND i2 < 3 THEN Characteristic1\n\
         ELSE IF NOT StandardShiftOperation AND i2 < i4 THEN Characteristic2\n\
     }\n",
    // Scaled-sum function on a quarter-hour grid.
    "grid step 900\n\
     sensor s1 numeric unit \"degC\"\n\
     sensor s2 numeric unit \"degC\"\n\
     function f context(s1, s2) { (s1 + s2) / 100 }\n",
    // Hourly average of a consumption sensor.
    "sensor s1 numeric unit \"l\"\n\
     metric averageWaterConsumptionPerHour context(s1) { AVERAGE PerHour }\n",
    // Every built-in aggregate and time filter.
    "sensor p numeric\n\
     metric m1 context(p) { AVERAGE PerHour }\n\
     metric m2 context(p) { SUM PerWeek }\n\
     metric m3 context(p) { MAXIMUM PerQuarter }\n\
     metric m4 context(p) { MINIMUM PerYear }\n\
     metric m5 context(p) { STDDEV PerMonth }\n\
     metric m6 context(p) { PERCENTILE(95) PerDay }\n",
    // Routine composition with include/exclude.
    "timeroutine CoreHours {\n\
         dayofweek Monday-Friday\n\
         hour 8-17\n\
         include SaturdayService\n\
         exclude PublicHolidays\n\
     }\n\
     timeroutine SaturdayService {\n\
         dayofweek Saturday\n\
         hour 9-12\n\
     }\n\
     timeroutine PublicHolidays {\n\
         month 12\n\
         day 24-26, 31\n\
     }\n",
    // One-sided envelope with negative coordinates.
    "sensor outdoor numeric\n\
     sensor supply numeric\n\
     characteristic HeatingCurve {\n\
         x outdoor\n\
         y supply\n\
         lower (-15, 70) (-5, 60) (5, 45) (15, 30)\n\
     }\n",
    // Template with one parameter of each kind.
    "template LimitCheck(level numeric, enabled logic) {\n\
         rule WithinLimit context(level, enabled) {\n\
             enabled IMPLIES level < 100\n\
         }\n\
         metric DailyPeak context(level) { MAXIMUM PerDay }\n\
     }\n",
    // Right-associative implication chain.
    "rule Chain { a IMPLIES b IMPLIES c }\n",
    // Left-grouped implication needs parentheses.
    "rule Grouped { (a IMPLIES b) IMPLIES c }\n",
    // Connective precedence mix.
    "rule Mixed { a AND b OR c AND d IMPLIES e OR f }\n",
    // Negation over references and comparisons.
    "sensor ok logic\n\
     sensor a numeric\n\
     rule Negations context(ok, a) { NOT ok AND NOT (a > 5) }\n",
    // Nested pointwise library calls.
    "sensor a numeric\n\
     sensor b numeric\n\
     sensor c numeric\n\
     function peak context(a, b, c) {\n\
         MAXIMUM(SUM(a, b), AVERAGE(a, b, c))\n\
     }\n",
    // Comparison over arithmetic on both sides.
    "rule Balanced { (a + b) / 2 >= c * 1.5 - 0.25 }\n",
    // Dangling else disambiguated by grouping.
    "rule Nested { IF a THEN (IF b THEN c) ELSE d }\n",
    // Conditional chain without grouping plus else-less tail.
    "rule Ladder { IF a THEN b ELSE IF c THEN d ELSE IF e THEN f }\n",
    // Boolean literals in both branches.
    "sensor enabled logic\n\
     sensor x numeric\n\
     rule Fallback context(enabled, x) { IF enabled THEN x > 0 ELSE true }\n",
    // Every comparison operator.
    "rule Comparisons { a != b AND a == c OR a <= d AND a >= e }\n",
    // Function feeding a metric feeding nothing; rule reuses the function.
    "sensor supply numeric\n\
     sensor ret numeric\n\
     function spread context(supply, ret) { supply - ret }\n\
     metric weeklySpread context(spread) { AVERAGE PerWeek }\n\
     rule SpreadOk context(supply, ret) { spread > 2 OR supply < 25 }\n",
    // Year, month, and second patterns with lists and ranges.
    "timeroutine SummerMaintenance {\n\
         year 2010-2012\n\
         month 6-8\n\
         day 1, 15\n\
         hour 6\n\
         minute 0, 30\n\
         second 0\n\
     }\n",
    // Two-sided envelope with fractional breakpoints.
    "sensor load numeric\n\
     sensor eff numeric\n\
     characteristic EfficiencyBand {\n\
         x load\n\
         y eff\n\
         lower (0.1, 0.55) (0.5, 0.8) (1, 0.82)\n\
         upper (0.1, 0.75) (0.5, 0.93) (1, 0.95)\n\
     }\n",
    // Quoted metadata with escapes, logic sensor, subtraction chain.
    "sensor flow numeric unit \"m3/h\" label \"Flow \\\"raw\\\"\"\n\
     sensor pump logic label \"Pump state\"\n\
     rule PumpImpliesFlow context(flow, pump) { pump IMPLIES flow > 0.2 }\n\
     function drift context(flow) { flow - 1 - 0.5 / 2 * 4 }\n",
    // Template beside top-level artifacts, empty-context rule.
    "grid step 60\n\
     sensor t1 numeric\n\
     rule AlwaysOn { true }\n\
     template Window(v numeric) {\n\
         rule InWindow context(v) { v >= 10 AND v <= 30 }\n\
     }\n\
     metric hourly context(t1) { AVERAGE PerHour }\n",
    // Division-by-reference and unary minus literals.
    "sensor num numeric\n\
     sensor den numeric\n\
     function ratio context(num, den) { num / den * -1 + -0.5 }\n",
];
