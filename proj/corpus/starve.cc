def X { p.e->q.x; r.e'->s.y; X }
main { X }
