main {
  if p.e then p->q[left]; p.1->q.y
  else p->q[right]; q.2->p.x
}
