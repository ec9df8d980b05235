def X { r.e'->s.y; p.e->q.x; X }
main { X }
