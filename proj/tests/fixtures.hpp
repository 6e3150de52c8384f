#pragma once

// Shared program texts used across the test suites. These mirror the bundled
// example strategies under examples/ so expectations stay in one place.

namespace fixtures {

// Two overlapping sources feeding a union-style view.
inline const char* kExample1 = R"(
source r1(a:int).
source r2(a:int).
view v(a:int).

-r1(X) :- r1(X), not v(X).
-r2(X) :- r2(X), not v(X).
+r1(X) :- v(X), not r1(X), not r2(X).
)";

// The unique view definition the basics strategy corresponds to.
inline const char* kExample1Get = R"(
source r1(a:int).
source r2(a:int).
view v(a:int).

v(X) :- r1(X).
v(X) :- r2(X).
)";

// Selection view over a binary relation; uses an intermediate predicate.
inline const char* kExample5 = R"(
source r(a:int, b:int).
view v(a:int, b:int).

+r(X, Y) :- v(X, Y), not r(X, Y).
m(X, Y) :- r(X, Y), Y > 2.
-r(X, Y) :- m(X, Y), not v(X, Y).
)";

inline const char* kExample5Get = R"(
source r(a:int, b:int).
view v(a:int, b:int).

v(X, Y) :- r(X, Y), Y > 2.
)";

// ---- employee case study ---------------------------------------------------

// residents = others ∪ (female as 'F') ∪ (male as 'M')
inline const char* kResidents = R"(
source male(emp_name:string, birth_date:date).
source female(emp_name:string, birth_date:date).
source others(emp_name:string, birth_date:date, gender:string).
view residents(emp_name:string, birth_date:date, gender:string).

+male(E, B) :- residents(E, B, 'M'), not male(E, B), not others(E, B, 'M').
-male(E, B) :- male(E, B), not residents(E, B, 'M').
+female(E, B) :- residents(E, B, G), G = 'F', not female(E, B), not others(E, B, G).
-female(E, B) :- female(E, B), not residents(E, B, 'F').
+others(E, B, G) :- residents(E, B, G), not G = 'M', not G = 'F', not others(E, B, G).
-others(E, B, G) :- others(E, B, G), not residents(E, B, G).
)";

inline const char* kResidentsGet = R"(
source male(emp_name:string, birth_date:date).
source female(emp_name:string, birth_date:date).
source others(emp_name:string, birth_date:date, gender:string).
view residents(emp_name:string, birth_date:date, gender:string).

residents(E, B, G) :- others(E, B, G).
residents(E, B, 'F') :- female(E, B).
residents(E, B, 'M') :- male(E, B).
)";

// ced = current employee departments: ed pairs not marked as ended in eed.
inline const char* kCed = R"(
source ed(emp_name:string, dept_name:string).
source eed(emp_name:string, dept_name:string).
view ced(emp_name:string, dept_name:string).

+ed(E, D) :- ced(E, D), not ed(E, D).
-eed(E, D) :- ced(E, D), eed(E, D).
+eed(E, D) :- ed(E, D), not ced(E, D), not eed(E, D).
)";

inline const char* kCedGet = R"(
source ed(emp_name:string, dept_name:string).
source eed(emp_name:string, dept_name:string).
view ced(emp_name:string, dept_name:string).

ced(E, D) :- ed(E, D), not eed(E, D).
)";

// residents born in 1962; constraints reject out-of-range updates.
inline const char* kResidents1962 = R"(
source residents(emp_name:string, birth_date:date, gender:string).
view residents1962(emp_name:string, birth_date:date, gender:string).

_|_ :- residents1962(E, B, G), B > '1962-12-31'.
_|_ :- residents1962(E, B, G), B < '1962-01-01'.
+residents(E, B, G) :- residents1962(E, B, G), not residents(E, B, G).
-residents(E, B, G) :- residents(E, B, G), not B < '1962-01-01', not B > '1962-12-31', not residents1962(E, B, G).
)";

inline const char* kResidents1962Get = R"(
source residents(emp_name:string, birth_date:date, gender:string).
view residents1962(emp_name:string, birth_date:date, gender:string).

residents1962(E, B, G) :- residents(E, B, G), not B < '1962-01-01', not B > '1962-12-31'.
)";

// employees = residents currently in some department.
inline const char* kEmployees = R"(
source residents(emp_name:string, birth_date:date, gender:string).
source ced(emp_name:string, dept_name:string).
view employees(emp_name:string, birth_date:date, gender:string).

_|_ :- employees(E, B, G), not ced(E, _).
+residents(E, B, G) :- employees(E, B, G), not residents(E, B, G).
-residents(E, B, G) :- residents(E, B, G), ced(E, _), not employees(E, B, G).
)";

inline const char* kEmployeesGet = R"(
source residents(emp_name:string, birth_date:date, gender:string).
source ced(emp_name:string, dept_name:string).
view employees(emp_name:string, birth_date:date, gender:string).

employees(E, B, G) :- residents(E, B, G), ced(E, D).
)";

// retired = residents with no current department.
inline const char* kRetired = R"(
source residents(emp_name:string, birth_date:date, gender:string).
source ced(emp_name:string, dept_name:string).
view retired(emp_name:string).

-ced(E, D) :- ced(E, D), retired(E).
+ced(E, D) :- residents(E, _, _), not retired(E), not ced(E, _), D = 'unknown'.
+residents(E, B, G) :- retired(E), G = 'unknown', not residents(E, _, _), B = '0000-01-01'.
)";

inline const char* kRetiredGet = R"(
source residents(emp_name:string, birth_date:date, gender:string).
source ced(emp_name:string, dept_name:string).
view retired(emp_name:string).

retired(E) :- residents(E, B, G), not ced(E, _).
)";

}  // namespace fixtures
